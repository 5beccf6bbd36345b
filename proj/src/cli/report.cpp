#include <cstdlib>
#include <ctime>
#include <fstream>

#include "bos/cli.hpp"

namespace bos::cli {

int exit_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::quadrature_non_convergence:
    case ErrorCode::solver_breakdown:
    case ErrorCode::eigensolver_failure:
    case ErrorCode::near_eigenvalue:
      return kExitNumerical;
    default:
      return kExitInvalidConfig;
  }
}

Check check_le(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, "<=", value <= threshold};
}

Check check_ge(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, ">=", value >= threshold};
}

Check check_true(std::string name, bool ok) {
  return {std::move(name), ok ? 1.0 : 0.0, 1.0, "==", ok};
}

std::string timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) t = std::time_t(std::atoll(epoch));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Report::Report(std::string command, json config)
    : command_(std::move(command)), config_(std::move(config)) {}

void Report::set_error(const Error& e) { set_error(e.code(), e.what()); }

void Report::set_error(ErrorCode code, const std::string& message) {
  has_error_ = true;
  error_code_ = code;
  error_message_ = message;
}

bool Report::all_pass() const {
  for (const auto& c : checks_) {
    if (!c.pass) return false;
  }
  return true;
}

int Report::exit_status() const {
  if (has_error_) return exit_status_for(error_code_);
  return all_pass() ? kExitOk : kExitCheckFailed;
}

json Report::to_json() const {
  json j;
  j["schema_version"] = 1;
  j["timestamp"] = timestamp();
  j["command"] = command_;
  j["config"] = config_;
  j["results"] = results_;
  json checks = json::array();
  for (const auto& c : checks_) {
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"threshold", c.threshold},
                      {"op", c.op},
                      {"pass", c.pass}});
  }
  j["checks"] = checks;
  j["status"] = exit_status();
  if (has_error_) {
    j["error"] = {{"code", std::string(to_string(error_code_))},
                  {"message", error_message_},
                  {"exit_status", exit_status()}};
  }
  return j;
}

void Report::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write report '" + path + "'");
  out << to_json().dump(2) << '\n';
}

}  // namespace bos::cli
