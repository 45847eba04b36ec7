#include "rmteq/io/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>
#include <vector>

#include "rmteq/errors.hpp"
#include "rmteq/io/format.hpp"

namespace rmteq::io {

namespace {

// Minimal TOML value model: enough for flat configuration files.
struct Integer {
  bool negative = false;
  std::uint64_t magnitude = 0;
};
struct Value;
using Array = std::vector<Value>;
struct Value {
  std::variant<Integer, double, bool, std::string, Array> v;
  int line = 0;
};

class Parser {
 public:
  Parser(std::string_view text, std::string source) : s_(text), source_(std::move(source)) {}

  std::map<std::string, Value> document() {
    std::map<std::string, Value> out;
    while (true) {
      skip_ws_comments_newlines();
      if (at_end()) break;
      if (peek() == '[') fail("tables are not supported; use top-level keys only");
      const int key_line = line_;
      std::string key = parse_key();
      skip_inline_ws();
      expect('=');
      skip_inline_ws();
      Value val = parse_value();
      val.line = key_line;
      skip_inline_ws();
      if (!at_end() && peek() == '#') skip_comment();
      if (!at_end() && peek() != '\n' && peek() != '\r') fail("expected end of line after value");
      if (out.count(key)) fail("duplicate key '" + key + "'", key_line);
      out.emplace(std::move(key), std::move(val));
    }
    return out;
  }

  // Single `key=value` pair from an override.
  std::pair<std::string, Value> assignment() {
    skip_inline_ws();
    std::string key = parse_key();
    skip_inline_ws();
    expect('=');
    skip_inline_ws();
    Value val = parse_value();
    val.line = line_;
    skip_inline_ws();
    if (!at_end()) fail("trailing characters after value");
    return {std::move(key), std::move(val)};
  }

  [[noreturn]] void fail(const std::string& msg, int line = -1) const {
    throw ConfigError(source_ + ":" + std::to_string(line < 0 ? line_ : line) + ": " + msg);
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  char get() {
    const char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }
  void expect(char c) {
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }
  void skip_inline_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) get();
  }
  void skip_comment() {
    while (!at_end() && peek() != '\n') get();
  }
  void skip_ws_comments_newlines() {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        get();
      } else if (c == '#') {
        skip_comment();
      } else {
        break;
      }
    }
  }

  std::string parse_key() {
    if (!at_end() && (peek() == '"' || peek() == '\'')) return parse_string();
    std::string key;
    while (!at_end()) {
      const char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
        key.push_back(get());
      } else {
        break;
      }
    }
    if (key.empty()) fail("expected a key");
    if (!at_end() && peek() == '.') fail("dotted keys are not supported");
    return key;
  }

  std::string parse_string() {
    const char quote = get();
    if (pos_ + 1 < s_.size() && peek() == quote && s_[pos_ + 1] == quote) {
      fail("multi-line strings are not supported");
    }
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == quote) break;
      if (c == '\\' && quote == '"') {
        if (at_end()) fail("unterminated escape");
        const char e = get();
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case 'r': out.push_back('\r'); break;
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  Value parse_value() {
    if (at_end()) fail("missing value");
    const char c = peek();
    Value v;
    v.line = line_;
    if (c == '"' || c == '\'') {
      v.v = parse_string();
    } else if (c == '[') {
      v.v = parse_array();
    } else if (c == '{') {
      fail("inline tables are not supported");
    } else {
      v.v = parse_scalar();
    }
    return v;
  }

  Array parse_array() {
    expect('[');
    Array out;
    while (true) {
      skip_ws_comments_newlines();
      if (at_end()) fail("unterminated array");
      if (peek() == ']') {
        get();
        break;
      }
      out.push_back(parse_value());
      skip_ws_comments_newlines();
      if (at_end()) fail("unterminated array");
      if (peek() == ',') {
        get();
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
    return out;
  }

  std::variant<Integer, double, bool, std::string, Array> parse_scalar() {
    std::string tok;
    while (!at_end()) {
      const char c = peek();
      if (c == ',' || c == ']' || c == '#' || c == ' ' || c == '\t' || c == '\n' || c == '\r') break;
      tok.push_back(get());
    }
    if (tok.empty()) fail("missing value");
    if (tok == "true") return true;
    if (tok == "false") return false;
    std::string clean;
    for (std::size_t i = 0; i < tok.size(); ++i) {
      if (tok[i] == '_') {
        if (i == 0 || i + 1 == tok.size() || !std::isdigit(static_cast<unsigned char>(tok[i - 1])) ||
            !std::isdigit(static_cast<unsigned char>(tok[i + 1]))) {
          fail("misplaced '_' in number '" + tok + "'");
        }
        continue;
      }
      clean.push_back(tok[i]);
    }
    std::string_view body = clean;
    bool negative = false;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
      negative = body[0] == '-';
      body.remove_prefix(1);
    }
    if (body == "inf" || body == "nan") {
      const double x = body == "inf" ? INFINITY : NAN;
      return negative ? -x : x;
    }
    const bool is_float = body.find_first_of(".eE") != std::string_view::npos;
    if (!is_float) {
      Integer i;
      i.negative = negative;
      const auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), i.magnitude);
      if (ec != std::errc() || p != body.data() + body.size() || body.empty()) {
        fail("invalid value '" + tok + "'");
      }
      if (body.size() > 1 && body[0] == '0') fail("leading zeros are not allowed in '" + tok + "'");
      return i;
    }
    double x = 0.0;
    const auto [p, ec] = std::from_chars(clean.data(), clean.data() + clean.size(), x);
    if (ec != std::errc() || p != clean.data() + clean.size()) fail("invalid number '" + tok + "'");
    return x;
  }

  std::string_view s_;
  std::string source_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

// Typed accessors with line-tagged errors.
struct Ctx {
  std::string source;
  std::string key;
  int line;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(source + ":" + std::to_string(line) + ": " + key + ": " + msg);
  }

  std::int64_t as_int(const Value& v, std::int64_t lo, std::int64_t hi) const {
    const auto* i = std::get_if<Integer>(&v.v);
    if (!i) fail("expected an integer");
    if (i->magnitude > static_cast<std::uint64_t>(INT64_MAX)) fail("integer out of range");
    const auto x = static_cast<std::int64_t>(i->magnitude) * (i->negative ? -1 : 1);
    if (x < lo || x > hi) fail("value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
  }
  std::uint64_t as_u64(const Value& v) const {
    const auto* i = std::get_if<Integer>(&v.v);
    if (!i) fail("expected an integer");
    if (i->negative && i->magnitude != 0) fail("must be nonnegative");
    return i->magnitude;
  }
  double as_real(const Value& v) const {
    if (const auto* d = std::get_if<double>(&v.v)) return *d;
    if (const auto* i = std::get_if<Integer>(&v.v)) {
      const auto m = static_cast<double>(i->magnitude);
      return i->negative ? -m : m;
    }
    fail("expected a number");
  }
  double as_positive_real(const Value& v) const {
    const double x = as_real(v);
    if (!(x > 0.0) || !std::isfinite(x)) fail("must be positive and finite");
    return x;
  }
  const std::string& as_string(const Value& v) const {
    const auto* s = std::get_if<std::string>(&v.v);
    if (!s) fail("expected a string");
    return *s;
  }
  std::vector<std::int64_t> as_int_array(const Value& v, std::int64_t lo, std::int64_t hi) const {
    const auto* a = std::get_if<Array>(&v.v);
    if (!a) fail("expected an array of integers");
    std::vector<std::int64_t> out;
    for (const auto& e : *a) out.push_back(as_int(e, lo, hi));
    if (out.empty()) fail("array must not be empty");
    return out;
  }
};

void apply(RunConfig& cfg, const std::map<std::string, Value>& kv, const std::string& source,
           const std::map<std::string, std::string>& origin) {
  auto& ex = cfg.experiment;
  const bool has_sizes = kv.count("sizes") > 0;
  const bool has_dims = kv.count("dims") > 0;
  if (has_sizes && has_dims) {
    Ctx{origin.count("dims") ? origin.at("dims") : source, "dims", kv.at("dims").line}.fail("'sizes' and 'dims' are mutually exclusive");
  }
  for (const auto& [key, val] : kv) {
    const auto o = origin.find(key);
    const Ctx c{o == origin.end() ? source : o->second, key, val.line};
    if (key == "sizes") {
      ex.sizes.clear();
      for (auto l : c.as_int_array(val, 2, 24)) ex.sizes.push_back(SizeSpec::from_spins(static_cast<int>(l)));
    } else if (key == "dims") {
      ex.sizes.clear();
      for (auto n : c.as_int_array(val, 2, 1 << 16)) ex.sizes.push_back(SizeSpec::from_dim(static_cast<std::size_t>(n)));
    } else if (key == "sigma_rule") {
      const std::string& s = c.as_string(val);
      if (s == "fixed") {
        ex.sigma_rule.kind = SigmaRuleKind::Fixed;
      } else if (s == "inverse_sqrt_n") {
        ex.sigma_rule.kind = SigmaRuleKind::InverseSqrtN;
      } else {
        c.fail("expected \"fixed\" or \"inverse_sqrt_n\", got \"" + s + "\"");
      }
    } else if (key == "sigma") {
      ex.sigma_rule.value = c.as_positive_real(val);
    } else if (key == "samples_per_size") {
      ex.samples_per_size = static_cast<int>(c.as_int(val, 1, 100'000'000));
    } else if (key == "state_kind") {
      const std::string& s = c.as_string(val);
      if (s == "haar_random") {
        ex.state_kind = StateKind::HaarRandom;
      } else if (s == "basis_all_up") {
        ex.state_kind = StateKind::BasisAllUp;
      } else {
        c.fail("expected \"haar_random\" or \"basis_all_up\", got \"" + s + "\"");
      }
    } else if (key == "grid_dt_fraction") {
      ex.grid.dt_fraction = c.as_positive_real(val);
    } else if (key == "grid_t_max_factor") {
      ex.grid.t_max_factor = c.as_positive_real(val);
    } else if (key == "master_seed") {
      ex.master_seed = c.as_u64(val);
    } else if (key == "workers") {
      ex.workers = static_cast<int>(c.as_int(val, 1, 1024));
    } else if (key == "sample_index") {
      cfg.sample_index = static_cast<std::size_t>(c.as_int(val, 0, INT64_MAX));
    } else if (key == "histogram_bins") {
      cfg.histogram_bins = static_cast<int>(c.as_int(val, 1, 100000));
    } else if (key == "artifact_version") {
      (void)c.as_string(val);
    } else {
      c.fail("unknown key '" + key + "'");
    }
  }
}

}  // namespace

RunConfig::RunConfig() {
  for (int l = 2; l <= 8; ++l) experiment.sizes.push_back(SizeSpec::from_spins(l));
}

RunConfig parse_config_text(std::string_view text, std::string_view source_name,
                            std::span<const std::string> overrides) {
  RunConfig cfg;
  const std::string source(source_name);
  std::map<std::string, Value> kv = Parser(text, source).document();
  std::map<std::string, std::string> origin;
  for (std::size_t i = 0; i < overrides.size(); ++i) {
    const std::string where = "--set #" + std::to_string(i + 1);
    std::pair<std::string, Value> parsed;
    try {
      parsed = Parser(overrides[i], where).assignment();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()) + " (in '" + overrides[i] + "')");
    }
    auto& [key, val] = parsed;
    // An override of one size key replaces the other.
    if (key == "sizes") kv.erase("dims");
    if (key == "dims") kv.erase("sizes");
    origin[key] = where;
    kv.insert_or_assign(std::move(key), std::move(val));
  }
  apply(cfg, kv, source, origin);
  try {
    cfg.experiment.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

RunConfig parse_config(const std::optional<std::filesystem::path>& path,
                       std::span<const std::string> overrides) {
  if (!path) return parse_config_text("", "<defaults>", overrides);
  std::ifstream in(*path, std::ios::binary);
  if (!in) throw IoError(path->string() + ": cannot open configuration file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path->string(), overrides);
}

std::string_view state_kind_name(StateKind kind) {
  return kind == StateKind::HaarRandom ? "haar_random" : "basis_all_up";
}

std::string_view sigma_rule_name(SigmaRuleKind kind) {
  return kind == SigmaRuleKind::Fixed ? "fixed" : "inverse_sqrt_n";
}

std::string to_toml(const RunConfig& cfg, std::string_view header_comment) {
  const auto& ex = cfg.experiment;
  std::ostringstream out;
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  out << "artifact_version = \"" << RMTEQ_VERSION << "\"\n";
  const bool all_spins = std::all_of(ex.sizes.begin(), ex.sizes.end(),
                                     [](const SizeSpec& s) { return s.num_spins.has_value(); });
  out << (all_spins ? "sizes = [" : "dims = [");
  for (std::size_t i = 0; i < ex.sizes.size(); ++i) {
    if (i) out << ", ";
    if (all_spins) {
      out << *ex.sizes[i].num_spins;
    } else {
      out << ex.sizes[i].n;
    }
  }
  out << "]\n";
  out << "sigma_rule = \"" << sigma_rule_name(ex.sigma_rule.kind) << "\"\n";
  out << "sigma = " << format_toml_real(ex.sigma_rule.value) << "\n";
  out << "samples_per_size = " << ex.samples_per_size << "\n";
  out << "state_kind = \"" << state_kind_name(ex.state_kind) << "\"\n";
  out << "grid_dt_fraction = " << format_toml_real(ex.grid.dt_fraction) << "\n";
  out << "grid_t_max_factor = " << format_toml_real(ex.grid.t_max_factor) << "\n";
  out << "master_seed = " << ex.master_seed << "\n";
  out << "workers = " << ex.workers << "\n";
  out << "sample_index = " << cfg.sample_index << "\n";
  out << "histogram_bins = " << cfg.histogram_bins << "\n";
  return out.str();
}

}  // namespace rmteq::io
