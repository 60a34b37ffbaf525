#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tgem {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or unknown configuration key. `key()` is the dotted path, e.g. "medium.gamma".
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A validity condition graded "fail" and the caller did not force the run.
class ConditionError : public Error {
 public:
  ConditionError(const std::string& what, std::string report)
      : Error(what), report_(std::move(report)) {}
  const std::string& report() const noexcept { return report_; }

 private:
  std::string report_;
};

/// Schedule/time-window problems: time beyond protocol, clipped pulse, missing phases.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Non-finite sample produced by the integrator.
class NumericError : public Error {
 public:
  NumericError(std::size_t step, std::size_t cell, const std::string& what)
      : Error("step " + std::to_string(step) + ", cell " + std::to_string(cell) + ": " + what),
        step_(step),
        cell_(cell) {}
  std::size_t step() const noexcept { return step_; }
  std::size_t cell() const noexcept { return cell_; }

 private:
  std::size_t step_;
  std::size_t cell_;
};

}  // namespace tgem
