#pragma once

// Line-oriented run configuration:
//
//   # comment
//   [coupling]
//   r = 2
//   M = 0, 0.5, 1, 2
//   lambda_tau = log(1e-6, 1e-2, 41)
//
// Every key has a declared kind and a default; unknown sections or keys,
// duplicates and malformed values are rejected with the line number.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace holosim {

enum class ValueKind { Number, Integer, Bool, List, Sweep };

struct ConfigValue {
  ValueKind kind;
  std::string text;            // as written, or the default
  std::vector<double> values;  // expanded; one entry for scalars
};

class RunConfig {
 public:
  /// Defaults for every key.
  RunConfig();

  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::string& path);

  double number(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  bool boolean(const std::string& key) const;
  const std::vector<double>& values(const std::string& key) const;

  /// Replaces a value as if it had been written in the file.
  void set(const std::string& key, const std::string& text);

  /// "section.key" = text for every key, in declaration order.
  std::vector<std::pair<std::string, std::string>> echo() const;

 private:
  const ConfigValue& get(const std::string& key, ValueKind kind) const;

  std::map<std::string, ConfigValue> values_;
};

}  // namespace holosim
