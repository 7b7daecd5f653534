#pragma once

#include <span>
#include <string>
#include <vector>

namespace coagfrag {

// Text form with 17 significant digits; non-finite values become nan/inf.
std::string format_real(double v);

// Flat JSON object writer with 17-significant-digit numbers and insertion-ordered keys.
class JsonObject {
 public:
  JsonObject& add_real(const std::string& key, double v);
  JsonObject& add_int(const std::string& key, long long v);
  JsonObject& add_text(const std::string& key, const std::string& v);
  JsonObject& add_bool(const std::string& key, bool v);
  JsonObject& add_array(const std::string& key, std::span<const double> v);
  JsonObject& add_raw(const std::string& key, const std::string& json);
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

std::string json_real(double v);
std::string json_quote(const std::string& s);

}  // namespace coagfrag
