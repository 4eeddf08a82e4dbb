#pragma once

#include <stdexcept>
#include <string>

namespace dcs {

// A spectral point whose kinematics the amplitude machinery cannot serve
// (off-shell input, lightfront-degenerate momenta, soft/collinear phases).
// Scans catch this and mask the point.
class KinematicError : public std::domain_error
{
 public:
  explicit KinematicError(const std::string& what) : std::domain_error(what) {}
};

// Invalid or inconsistent user configuration.
class ConfigError : public std::invalid_argument
{
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace dcs
