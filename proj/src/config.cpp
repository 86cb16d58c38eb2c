#include "curvefem/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "curvefem/errors.hpp"

namespace cfem {

void StudyConfig::validate() const {
  if (problem != "ventcel-disk" && problem != "sphere-laplace")
    throw ConfigError("problem must be ventcel-disk or sphere-laplace");
  if (r_list.empty()) throw ConfigError("r list must be non-empty");
  if (k_list.empty()) throw ConfigError("k list must be non-empty");
  for (int r : r_list)
    if (r < 1 || r > 3) throw ConfigError("mesh degree r must be in {1,2,3}");
  for (int k : k_list)
    if (k < 1 || k > 4) throw ConfigError("FE degree k must be in {1,..,4}");
  if (levels < 2) throw ConfigError("levels must be >= 2");
  if (format != "csv" && format != "markdown")
    throw ConfigError("format must be csv or markdown");
}

namespace {

std::string strip(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

int parse_int(const std::string& s, int line_no) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line_no) + ": expected an integer, got '" + s +
                      "'");
  }
  if (pos != s.size())
    throw ConfigError("line " + std::to_string(line_no) + ": trailing characters in '" + s + "'");
  return v;
}

std::vector<int> parse_int_list(const std::string& raw, int line_no) {
  std::string body = raw;
  if (!body.empty() && body.front() == '[') {
    if (body.back() != ']')
      throw ConfigError("line " + std::to_string(line_no) + ": unterminated array");
    body = body.substr(1, body.size() - 2);
  }
  std::vector<int> values;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = strip(item);
    if (item.empty()) continue;
    values.push_back(parse_int(item, line_no));
  }
  if (values.empty())
    throw ConfigError("line " + std::to_string(line_no) + ": empty integer list");
  return values;
}

std::string parse_string(const std::string& raw, int line_no) {
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
    return raw.substr(1, raw.size() - 2);
  if (raw.find('"') != std::string::npos)
    throw ConfigError("line " + std::to_string(line_no) + ": malformed string " + raw);
  return raw; // tolerate bare words
}

} // namespace

StudyConfig parse_toml_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);

  StudyConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[')
      throw ConfigError("line " + std::to_string(line_no) + ": sections are not supported");
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (value.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": missing value for " + key);

    if (key == "problem")
      config.problem = parse_string(value, line_no);
    else if (key == "r")
      config.r_list = parse_int_list(value, line_no);
    else if (key == "k")
      config.k_list = parse_int_list(value, line_no);
    else if (key == "levels")
      config.levels = parse_int(value, line_no);
    else if (key == "lift")
      config.lift = lift_variant_from_string(parse_string(value, line_no));
    else if (key == "out")
      config.output_dir = parse_string(value, line_no);
    else if (key == "format")
      config.format = parse_string(value, line_no);
    else
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  return config;
}

} // namespace cfem
