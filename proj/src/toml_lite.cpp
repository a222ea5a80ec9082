#include "otlab/toml_lite.hpp"

#include <cctype>
#include <cstdlib>

#include "otlab/errors.hpp"

namespace otlab {

namespace {

using nlohmann::json;

struct Parser {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;

  explicit Parser(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("toml: line " + std::to_string(line) + ": " + msg);
  }

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  char take() {
    const char c = text[pos++];
    if (c == '\n') ++line;
    return c;
  }

  void skip_ws_comments() {
    while (!done()) {
      const char c = peek();
      if (c == '#') {
        while (!done() && peek() != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else {
        return;
      }
    }
  }

  bool is_bare_key_char(char c) const {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  std::string parse_key() {
    skip_ws_comments();
    if (done()) fail("expected a key");
    if (peek() == '"') return parse_string();
    std::string k;
    while (!done() && is_bare_key_char(peek())) k += take();
    if (k.empty()) fail("expected a key");
    return k;
  }

  std::vector<std::string> parse_dotted_key() {
    std::vector<std::string> parts{parse_key()};
    while (!done() && peek() == '.') {
      take();
      parts.push_back(parse_key());
    }
    return parts;
  }

  std::string parse_string() {
    if (take() != '"') fail("expected '\"'");
    std::string s;
    while (true) {
      if (done()) fail("unterminated string");
      char c = take();
      if (c == '"') break;
      if (c == '\n') fail("newline inside string");
      if (c == '\\') {
        if (done()) fail("dangling escape");
        const char e = take();
        switch (e) {
          case 'n': s += '\n'; break;
          case 't': s += '\t'; break;
          case '"': s += '"'; break;
          case '\\': s += '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      } else {
        s += c;
      }
    }
    return s;
  }

  json parse_scalar_word() {
    std::string w;
    while (!done()) {
      const char c = peek();
      if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ']' || c == '}' ||
          c == '#')
        break;
      w += take();
    }
    if (w.empty()) fail("expected a value");
    if (w == "true") return json(true);
    if (w == "false") return json(false);

    bool integral = true;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const char c = w[i];
      if (i == 0 && (c == '+' || c == '-')) continue;
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        integral = false;
        break;
      }
    }
    errno = 0;
    char* end = nullptr;
    if (integral) {
      const long long v = std::strtoll(w.c_str(), &end, 10);
      if (end == w.c_str() + w.size() && errno == 0) return json(v);
    }
    const double d = std::strtod(w.c_str(), &end);
    if (end != w.c_str() + w.size() || errno == ERANGE) fail("malformed value \"" + w + "\"");
    return json(d);
  }

  json parse_value() {
    skip_ws_comments();
    if (done()) fail("expected a value");
    const char c = peek();
    if (c == '"') return json(parse_string());
    if (c == '[') {
      take();
      json arr = json::array();
      skip_ws_comments();
      while (!done() && peek() != ']') {
        arr.push_back(parse_value());
        skip_ws_comments();
        if (!done() && peek() == ',') {
          take();
          skip_ws_comments();
        }
      }
      if (done()) fail("unterminated array");
      take();  // ']'
      return arr;
    }
    if (c == '{') {
      take();
      json obj = json::object();
      skip_ws_comments();
      while (!done() && peek() != '}') {
        const std::vector<std::string> path = parse_dotted_key();
        skip_ws_comments();
        if (done() || take() != '=') fail("expected '=' in inline table");
        assign(obj, path, parse_value());
        skip_ws_comments();
        if (!done() && peek() == ',') {
          take();
          skip_ws_comments();
        }
      }
      if (done()) fail("unterminated inline table");
      take();  // '}'
      return obj;
    }
    return parse_scalar_word();
  }

  static void assign(json& root, const std::vector<std::string>& path, json value) {
    json* cur = &root;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      json& next = (*cur)[path[i]];
      if (next.is_null()) next = json::object();
      if (!next.is_object())
        throw ConfigError("toml: key \"" + path[i] + "\" is not a table");
      cur = &next;
    }
    (*cur)[path.back()] = std::move(value);
  }

  json* open_table(json& root, const std::vector<std::string>& path) {
    json* cur = &root;
    for (const std::string& part : path) {
      json& next = (*cur)[part];
      if (next.is_null()) next = json::object();
      if (!next.is_object()) fail("table header \"" + part + "\" collides with a value");
      cur = &next;
    }
    return cur;
  }

  json parse_document() {
    json root = json::object();
    json* table = &root;
    while (true) {
      skip_ws_comments();
      if (done()) break;
      if (peek() == '[') {
        take();
        const std::vector<std::string> path = parse_dotted_key();
        skip_ws_comments();
        if (done() || take() != ']') fail("unterminated table header");
        table = open_table(root, path);
        continue;
      }
      const std::vector<std::string> path = parse_dotted_key();
      skip_ws_comments();
      if (done() || take() != '=') fail("expected '=' after key");
      assign(*table, path, parse_value());
    }
    return root;
  }
};

}  // namespace

nlohmann::json toml_to_json(const std::string& text) { return Parser(text).parse_document(); }

}  // namespace otlab
