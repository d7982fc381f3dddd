#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hs1d {

inline constexpr const char* kVersion = "0.1.0";

// Error categories; the CLI maps them to exit codes (config -> 2, numeric -> 3).
enum class Errc {
  InvalidModel,
  TolNotReached,
  NoConvergence,
  StalledFront,
  StepCollapse,
  OutOfDomain,
  OutOfTable,
  EmptySupport,
  ConfigError,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidModel: return "InvalidModel";
    case Errc::TolNotReached: return "TolNotReached";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::StalledFront: return "StalledFront";
    case Errc::StepCollapse: return "StepCollapse";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::OutOfTable: return "OutOfTable";
    case Errc::EmptySupport: return "EmptySupport";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace hs1d
