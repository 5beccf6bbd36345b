#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>  // vendored nlohmann/json

#include "bos/error.hpp"
#include "bos/params.hpp"

namespace bos::cli {

using json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitNumerical = 3;

int exit_status_for(ErrorCode code);

// --- config ------------------------------------------------------------------

/// Flat `key = value` lines; `#` starts a comment. Throws Error(io) when the
/// file cannot be read and Error(invalid_argument) on a malformed line.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

/// Rebuilds argv with config entries injected ahead of the user's flags so the
/// flags win. Keys seed/out/format go before the subcommand, the rest after
/// it. A `command` key supplies the subcommand when argv names none.
std::vector<std::string> merge_config(const std::vector<std::string>& argv);

/// "lo:hi:step" inclusive of hi up to rounding.
std::vector<double> parse_range(const std::string& text);
/// "16,32,64"
std::vector<int> parse_int_list(const std::string& text);
/// "RE,IM" or "RE"
std::pair<double, double> parse_complex(const std::string& text);
/// "a1,b1;a2,b2"; an empty string gives an empty grid.
std::vector<std::pair<double, double>> parse_param_grid(const std::string& text);

// --- report ------------------------------------------------------------------

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  /// "<=", ">=", "<", ">" or "==", read as `value op threshold`
  std::string op = "<=";
  bool pass = false;
};

Check check_le(std::string name, double value, double threshold);
Check check_ge(std::string name, double value, double threshold);
Check check_true(std::string name, bool ok);

class Report {
 public:
  Report(std::string command, json config);

  json& results() { return results_; }
  void add(Check c) { checks_.push_back(std::move(c)); }
  void add(const std::vector<Check>& cs) { checks_.insert(checks_.end(), cs.begin(), cs.end()); }
  void set_error(const Error& e);
  void set_error(ErrorCode code, const std::string& message);

  const std::vector<Check>& checks() const { return checks_; }
  bool all_pass() const;
  int exit_status() const;
  json to_json() const;
  void write(const std::string& path) const;

 private:
  std::string command_;
  json config_;
  json results_ = json::object();
  std::vector<Check> checks_;
  bool has_error_ = false;
  ErrorCode error_code_ = ErrorCode::invalid_argument;
  std::string error_message_;
};

/// ISO-8601 UTC; SOURCE_DATE_EPOCH overrides the clock when set.
std::string timestamp();

// --- verification -----------------------------------------------------------

struct VerifyOptions {
  int N = 64;
  int samples = 20;
  std::uint64_t seed = 1;
};

/// All per-parameter contracts for one (a, b). Results land in `results`.
std::vector<Check> verify_point(const OperatorParams& p, const VerifyOptions& opt,
                                json& results);

/// Parameter-independent checks (regime gate).
std::vector<Check> verify_global(json& results);

// --- entry point -------------------------------------------------------------

/// Parses argv (argv[0] included), runs the command and returns the exit
/// status. Log lines go to `log`.
int run(const std::vector<std::string>& argv, std::ostream& log);

}  // namespace bos::cli
