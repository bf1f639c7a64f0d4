#include "headergen/json_util.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace headergen {

namespace {

// SAX pass that only checks for duplicate keys per object level.
class DupKeyChecker : public nlohmann::json_sax<Json> {
public:
  explicit DupKeyChecker(const std::string& context) : context_(context) {}

  bool null() override { return true; }
  bool boolean(bool) override { return true; }
  bool number_integer(number_integer_t) override { return true; }
  bool number_unsigned(number_unsigned_t) override { return true; }
  bool number_float(number_float_t, const string_t&) override { return true; }
  bool string(string_t&) override { return true; }
  bool binary(binary_t&) override { return true; }

  bool start_object(std::size_t) override {
    keys_.emplace_back();
    return true;
  }
  bool key(string_t& k) override {
    auto& level = keys_.back();
    if (!level.insert(k).second) {
      fail(kind_, context_ + ": duplicate key \"" + k + "\"");
    }
    return true;
  }
  bool end_object() override {
    keys_.pop_back();
    return true;
  }
  bool start_array(std::size_t) override { return true; }
  bool end_array() override { return true; }

  bool parse_error(std::size_t position, const std::string&,
                   const nlohmann::detail::exception& ex) override {
    fail(kind_, context_ + ": invalid JSON at byte " + std::to_string(position) +
                    ": " + ex.what());
  }

  void set_kind(ErrorKind kind) { kind_ = kind; }

private:
  std::string context_;
  ErrorKind kind_ = ErrorKind::MalformedNotebook;
  std::vector<std::set<std::string>> keys_;
};

} // namespace

Json parse_json_checked(const std::string& text, const std::string& context,
                        ErrorKind kind) {
  DupKeyChecker checker(context);
  checker.set_kind(kind);
  Json::sax_parse(text, &checker);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& ex) {
    fail(kind, context + ": invalid JSON: " + ex.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorKind::Io, "cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    fail(ErrorKind::Io, "cannot write " + path);
  }
  out << content;
  if (!out) {
    fail(ErrorKind::Io, "write failed for " + path);
  }
}

} // namespace headergen
