#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace combhelper {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyGraphError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// An operation was applied to an object it is not defined for.
class MisuseError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class StaleCacheError : public Error {
 public:
  using Error::Error;
};

class TrainingDiverged : public Error {
 public:
  explicit TrainingDiverged(int epoch)
      : Error("loss became non-finite at epoch " + std::to_string(epoch)), epoch_(epoch) {}

  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

class OracleTimeout : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Wraps a failure inside one pipeline phase.
class PipelineError : public Error {
 public:
  PipelineError(std::string phase, const std::string& what)
      : Error("[" + phase + "] " + what), phase_(std::move(phase)) {}

  const std::string& phase() const noexcept { return phase_; }

 private:
  std::string phase_;
};

}  // namespace combhelper
