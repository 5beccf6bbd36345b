#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bos/cli.hpp"

namespace bos::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(trim(s), &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::invalid_argument, "not a number: '" + s + "'");
  }
  if (used != trim(s).size()) throw Error(ErrorCode::invalid_argument, "not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

const std::set<std::string> kCommands = {"assemble", "minverse", "factor-check",
                                         "resolvent", "hs-norm",  "spectrum",
                                         "evolve",    "growth",   "verify-all"};
const std::set<std::string> kGlobalKeys = {"seed", "out", "format"};

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty()) {
      throw Error(ErrorCode::invalid_argument,
                  path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

std::vector<std::string> merge_config(const std::vector<std::string>& argv) {
  std::string config_path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < argv.size(); ++i) {
    if (argv[i] == "--config" && i + 1 < argv.size()) {
      config_path = argv[++i];
    } else if (argv[i].rfind("--config=", 0) == 0) {
      config_path = argv[i].substr(9);
    } else {
      rest.push_back(argv[i]);
    }
  }
  if (config_path.empty()) return rest;

  const auto entries = read_config_file(config_path);
  std::vector<std::string> global, local;
  std::string command;
  for (const auto& [key, value] : entries) {
    if (key == "command") {
      command = value;
      continue;
    }
    auto& dst = kGlobalKeys.count(key) ? global : local;
    dst.push_back("--" + key);
    dst.push_back(value);
  }

  auto sub = std::find_if(rest.begin() + (rest.empty() ? 0 : 1), rest.end(),
                          [](const std::string& s) { return kCommands.count(s) > 0; });
  std::vector<std::string> out;
  if (!rest.empty()) out.push_back(rest.front());
  out.insert(out.end(), global.begin(), global.end());
  if (sub == rest.end()) {
    // no subcommand on the command line: the user's global flags stay in
    // front, everything else follows the configured subcommand
    std::vector<std::string> user_global, user_local;
    for (std::size_t i = rest.empty() ? 0 : 1; i < rest.size(); ++i) {
      const std::string& arg = rest[i];
      const std::string key = arg.rfind("--", 0) == 0 ? arg.substr(2, arg.find('=') - 2) : "";
      if (!key.empty() && kGlobalKeys.count(key)) {
        user_global.push_back(arg);
        if (arg.find('=') == std::string::npos && i + 1 < rest.size()) user_global.push_back(rest[++i]);
      } else {
        user_local.push_back(arg);
      }
    }
    out.insert(out.end(), user_global.begin(), user_global.end());
    if (!command.empty()) {
      out.push_back(command);
      out.insert(out.end(), local.begin(), local.end());
    }
    out.insert(out.end(), user_local.begin(), user_local.end());
    return out;
  }
  out.insert(out.end(), rest.begin() + 1, sub + 1);
  out.insert(out.end(), local.begin(), local.end());
  out.insert(out.end(), sub + 1, rest.end());
  return out;
}

std::vector<double> parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw Error(ErrorCode::invalid_argument, "range must be lo:hi:step");
  const double lo = to_double(parts[0]), hi = to_double(parts[1]), step = to_double(parts[2]);
  if (!(step > 0.0) || !(hi >= lo)) {
    throw Error(ErrorCode::invalid_argument, "range needs step > 0 and hi >= lo");
  }
  const long count = std::lround(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out;
  for (long i = 0; i < count; ++i) out.push_back(lo + double(i) * step);
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    const double v = to_double(item);
    if (v != std::floor(v)) throw Error(ErrorCode::invalid_argument, "not an integer: " + item);
    out.push_back(int(v));
  }
  if (out.empty()) throw Error(ErrorCode::invalid_argument, "empty integer list");
  return out;
}

std::pair<double, double> parse_complex(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() == 1) return {to_double(parts[0]), 0.0};
  if (parts.size() == 2) return {to_double(parts[0]), to_double(parts[1])};
  throw Error(ErrorCode::invalid_argument, "complex value must be RE or RE,IM");
}

std::vector<std::pair<double, double>> parse_param_grid(const std::string& text) {
  std::vector<std::pair<double, double>> out;
  for (const auto& point : split(text, ';')) {
    if (point.empty()) continue;
    const auto ab = split(point, ',');
    if (ab.size() != 2) throw Error(ErrorCode::invalid_argument, "grid point must be a,b");
    out.emplace_back(to_double(ab[0]), to_double(ab[1]));
  }
  return out;
}

}  // namespace bos::cli
