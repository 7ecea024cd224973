#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "strongcert/certify.hpp"

namespace strongcert {

/// Malformed system description; what() names the offending field.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& field, const std::string& problem)
      : std::runtime_error("field '" + field + "': " + problem), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// {"n": int, "m": int, "H": [m arrays of n rows of n entries]}, entries real or [re, im].
DelaySystem parse_system(const nlohmann::json& j);
DelaySystem load_system(const std::string& path);

nlohmann::json to_json(const GammaTest& t);
nlohmann::json to_json(const StabilityReport& r, bool timings);

/// Subcommands scan, certify, bisect, export, bounds. Returns the process exit
/// code: 0 certified verdict or plain success, 2 undetermined, 1 usage or I/O error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace strongcert
