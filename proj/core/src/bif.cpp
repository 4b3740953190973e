#include "chainminer/bif.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "chainminer/error.hpp"
#include "chainminer/text.hpp"

namespace chainminer {

namespace {

enum class TokKind { kIdent, kNumber, kPunct, kEnd };

struct Token {
  TokKind kind = TokKind::kEnd;
  std::string text;
  double number = 0.0;
  int line = 0;
  int column = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= text_.size()) {
      t.kind = TokKind::kEnd;
      return t;
    }
    const char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = TokKind::kIdent;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
        t.text.push_back(text_[pos_]);
        advance();
      }
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = TokKind::kNumber;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_number_char(text_[pos_])) advance();
      t.text = text_.substr(start, pos_ - start);
      const auto res = std::from_chars(t.text.data(),
                                       t.text.data() + t.text.size(), t.number);
      if (res.ec != std::errc{} || res.ptr != t.text.data() + t.text.size()) {
        throw ParseError("malformed number '" + t.text + "'", t.line, t.column);
      }
      return t;
    }
    if (std::string("{}()[]|,;").find(c) != std::string::npos) {
      t.kind = TokKind::kPunct;
      t.text.assign(1, c);
      advance();
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_,
                     col_);
  }

 private:
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '.' || c == '-';
  }
  static bool is_number_char(char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
           c == 'e' || c == 'E' || c == '+' || c == '-';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      advance();
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lexer_(text) { shift(); }

  BayesianNetwork parse() {
    expect_keyword("network");
    const std::string net_name = expect_ident("network name");
    expect_punct("{");
    expect_punct("}");

    while (cur_.kind != TokKind::kEnd) {
      if (cur_.kind != TokKind::kIdent) {
        throw ParseError("expected 'variable' or 'probability'", cur_.line,
                         cur_.column);
      }
      if (cur_.text == "variable") {
        parse_variable();
      } else if (cur_.text == "probability") {
        parse_probability();
      } else {
        throw ParseError("expected 'variable' or 'probability', got '" +
                             cur_.text + "'",
                         cur_.line, cur_.column);
      }
    }

    for (const auto& v : variables_) {
      if (!have_cpt_[static_cast<std::size_t>(v.id)]) {
        throw ParseError("missing probability block for variable '" + v.name +
                             "'",
                         cur_.line, cur_.column);
      }
    }
    try {
      return BayesianNetwork(net_name, std::move(variables_),
                             std::move(cpts_));
    } catch (const StructureError& e) {
      throw ParseError(e.what(), cur_.line, cur_.column);
    }
  }

 private:
  void shift() { cur_ = lexer_.next(); }

  void expect_keyword(const std::string& kw) {
    if (cur_.kind != TokKind::kIdent || cur_.text != kw) {
      throw ParseError("expected '" + kw + "'", cur_.line, cur_.column);
    }
    shift();
  }

  std::string expect_ident(const std::string& what) {
    if (cur_.kind != TokKind::kIdent) {
      throw ParseError("expected " + what, cur_.line, cur_.column);
    }
    std::string s = cur_.text;
    shift();
    return s;
  }

  void expect_punct(const std::string& p) {
    if (cur_.kind != TokKind::kPunct || cur_.text != p) {
      throw ParseError("expected '" + p + "'", cur_.line, cur_.column);
    }
    shift();
  }

  bool accept_punct(const std::string& p) {
    if (cur_.kind == TokKind::kPunct && cur_.text == p) {
      shift();
      return true;
    }
    return false;
  }

  double expect_number() {
    if (cur_.kind != TokKind::kNumber) {
      throw ParseError("expected a probability", cur_.line, cur_.column);
    }
    const double v = cur_.number;
    shift();
    return v;
  }

  int require_variable(const std::string& name, const Token& at) const {
    const auto it = var_index_.find(name);
    if (it == var_index_.end()) {
      throw ParseError("unknown variable '" + name + "'", at.line, at.column);
    }
    return it->second;
  }

  void parse_variable() {
    shift();  // variable
    const Token name_tok = cur_;
    const std::string name = expect_ident("variable name");
    if (var_index_.count(name)) {
      throw ParseError("duplicate variable '" + name + "'", name_tok.line,
                       name_tok.column);
    }
    expect_punct("{");
    expect_keyword("type");
    expect_keyword("discrete");
    expect_punct("[");
    const Token count_tok = cur_;
    const double count_raw = expect_number();
    expect_punct("]");
    const int declared = static_cast<int>(count_raw);
    if (declared < 2 || static_cast<double>(declared) != count_raw) {
      throw ParseError("state count must be an integer >= 2", count_tok.line,
                       count_tok.column);
    }
    expect_punct("{");
    Variable var;
    var.id = static_cast<int>(variables_.size());
    var.name = name;
    do {
      var.states.push_back(expect_ident("state name"));
    } while (accept_punct(","));
    expect_punct("}");
    expect_punct(";");
    expect_punct("}");
    if (var.num_states() != declared) {
      throw ParseError("variable '" + name + "' declares " +
                           std::to_string(declared) + " states but lists " +
                           std::to_string(var.num_states()),
                       count_tok.line, count_tok.column);
    }
    var_index_.emplace(name, var.id);
    variables_.push_back(std::move(var));
    have_cpt_.push_back(false);
  }

  // Reads `count` comma-separated probabilities and a ';'. Rows are
  // renormalized when the sum is within 1e-6 of 1; the parse fails on worse.
  std::vector<double> parse_row(int count, const Token& at) {
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(count));
    do {
      const Token num_tok = cur_;
      const double p = expect_number();
      if (p < 0.0) {
        throw ParseError("negative probability", num_tok.line, num_tok.column);
      }
      row.push_back(p);
    } while (accept_punct(","));
    expect_punct(";");
    if (static_cast<int>(row.size()) != count) {
      throw ParseError("row lists " + std::to_string(row.size()) +
                           " probabilities, expected " + std::to_string(count),
                       at.line, at.column);
    }
    double sum = 0.0;
    for (double p : row) sum += p;
    if (std::fabs(sum - 1.0) > 1e-6) {
      std::ostringstream msg;
      msg << "probability row sums to " << sum << ", expected 1";
      throw ParseError(msg.str(), at.line, at.column);
    }
    if (std::fabs(sum - 1.0) > 1e-12) {
      for (double& p : row) p /= sum;
    }
    return row;
  }

  void parse_probability() {
    shift();  // probability
    expect_punct("(");
    const Token child_tok = cur_;
    const int child = require_variable(expect_ident("variable name"),
                                       child_tok);
    Cpt cpt;
    cpt.child = child;
    if (accept_punct("|")) {
      do {
        const Token p_tok = cur_;
        cpt.parents.push_back(
            require_variable(expect_ident("parent name"), p_tok));
      } while (accept_punct(","));
    }
    expect_punct(")");
    if (have_cpt_[static_cast<std::size_t>(child)]) {
      throw ParseError("duplicate probability block for '" +
                           variables_[static_cast<std::size_t>(child)].name +
                           "'",
                       child_tok.line, child_tok.column);
    }
    expect_punct("{");

    const int child_card =
        variables_[static_cast<std::size_t>(child)].num_states();
    long long rows = 1;
    std::vector<int> strides(cpt.parents.size(), 1);
    for (int k = static_cast<int>(cpt.parents.size()) - 1; k >= 0; --k) {
      strides[static_cast<std::size_t>(k)] = static_cast<int>(rows);
      rows *= variables_[static_cast<std::size_t>(
                             cpt.parents[static_cast<std::size_t>(k)])]
                  .num_states();
    }
    cpt.table.assign(static_cast<std::size_t>(rows * child_card), -1.0);
    std::vector<char> row_seen(static_cast<std::size_t>(rows), 0);

    if (cpt.parents.empty()) {
      const Token at = cur_;
      expect_keyword("table");
      const auto row = parse_row(child_card, at);
      std::copy(row.begin(), row.end(), cpt.table.begin());
      row_seen[0] = 1;
    } else {
      while (!accept_punct("}")) {
        const Token at = cur_;
        expect_punct("(");
        long long row_index = 0;
        for (std::size_t k = 0; k < cpt.parents.size(); ++k) {
          if (k > 0) expect_punct(",");
          const Token s_tok = cur_;
          const std::string state = expect_ident("state name");
          const Variable& pv = variables_[static_cast<std::size_t>(
              cpt.parents[k])];
          const auto si = pv.state_index(state);
          if (!si) {
            throw ParseError("'" + state + "' is not a state of '" + pv.name +
                                 "'",
                             s_tok.line, s_tok.column);
          }
          row_index += static_cast<long long>(*si) * strides[k];
        }
        expect_punct(")");
        if (row_seen[static_cast<std::size_t>(row_index)]) {
          throw ParseError("duplicate parent configuration", at.line,
                           at.column);
        }
        row_seen[static_cast<std::size_t>(row_index)] = 1;
        const auto row = parse_row(child_card, at);
        std::copy(row.begin(), row.end(),
                  cpt.table.begin() +
                      static_cast<std::ptrdiff_t>(row_index * child_card));
      }
      for (long long r = 0; r < rows; ++r) {
        if (!row_seen[static_cast<std::size_t>(r)]) {
          throw ParseError(
              "probability block for '" +
                  variables_[static_cast<std::size_t>(child)].name +
                  "' does not cover every parent configuration",
              cur_.line, cur_.column);
        }
      }
      have_cpt_[static_cast<std::size_t>(child)] = true;
      cpts_.push_back(std::move(cpt));
      return;
    }
    expect_punct("}");
    have_cpt_[static_cast<std::size_t>(child)] = true;
    cpts_.push_back(std::move(cpt));
  }

  Lexer lexer_;
  Token cur_;
  std::vector<Variable> variables_;
  std::vector<Cpt> cpts_;
  std::vector<char> have_cpt_;
  std::unordered_map<std::string, int> var_index_;
};

}  // namespace

BayesianNetwork parse_network(const std::string& text) {
  return Parser(text).parse();
}

BayesianNetwork parse_network_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open network file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

std::string serialize_network(const BayesianNetwork& net) {
  std::ostringstream out;
  out << "network " << net.name() << " {\n}\n";
  for (const auto& v : net.variables()) {
    out << "variable " << v.name << " {\n  type discrete [ " << v.num_states()
        << " ] { ";
    for (int s = 0; s < v.num_states(); ++s) {
      if (s) out << ", ";
      out << v.states[static_cast<std::size_t>(s)];
    }
    out << " };\n}\n";
  }
  for (const auto& v : net.variables()) {
    const Cpt& c = net.cpt(v.id);
    out << "probability ( " << v.name;
    if (!c.parents.empty()) {
      out << " |";
      for (std::size_t k = 0; k < c.parents.size(); ++k) {
        out << (k ? ", " : " ") << net.variable(c.parents[k]).name;
      }
    }
    out << " ) {\n";
    if (c.parents.empty()) {
      out << "  table ";
      for (int s = 0; s < c.child_card; ++s) {
        if (s) out << ", ";
        out << format_double(c.entry(0, s));
      }
      out << ";\n";
    } else {
      for (int r = 0; r < c.num_rows(); ++r) {
        out << "  (";
        for (std::size_t k = 0; k < c.parents.size(); ++k) {
          const Variable& pv = net.variable(c.parents[k]);
          const int state = (r / c.row_strides[k]) % pv.num_states();
          out << (k ? ", " : "") << pv.states[static_cast<std::size_t>(state)];
        }
        out << ") ";
        for (int s = 0; s < c.child_card; ++s) {
          if (s) out << ", ";
          out << format_double(c.entry(r, s));
        }
        out << ";\n";
      }
    }
    out << "}\n";
  }
  return out.str();
}

namespace {
struct BundledEntry {
  const char* name;
  const char* text;
};
#include "bundled_networks.inc"
}  // namespace

const std::vector<std::string>& bundled_network_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : kBundledNetworks) out.emplace_back(e.name);
    return out;
  }();
  return names;
}

bool is_bundled_network(const std::string& name) {
  const std::string key = to_lower(name);
  for (const auto& e : kBundledNetworks) {
    if (key == e.name) return true;
  }
  return false;
}

const std::string& bundled_network_text(const std::string& name) {
  const std::string key = to_lower(name);
  static const std::map<std::string, std::string> texts = [] {
    std::map<std::string, std::string> out;
    for (const auto& e : kBundledNetworks) out.emplace(e.name, e.text);
    return out;
  }();
  const auto it = texts.find(key);
  if (it == texts.end()) {
    std::string msg = "unknown bundled network '" + name + "'; available:";
    for (const auto& n : bundled_network_names()) msg += " " + n;
    throw ArgumentError(msg);
  }
  return it->second;
}

BayesianNetwork load_bundled(const std::string& name) {
  return parse_network(bundled_network_text(name));
}

long long parameter_count(const BayesianNetwork& net) {
  long long total = 0;
  for (const auto& v : net.variables()) {
    long long rows = 1;
    for (int p : net.parents(v.id)) {
      rows *= net.variable(p).num_states();
    }
    total += rows * (v.num_states() - 1);
  }
  return total;
}

NetworkSource resolve_network_source(const std::string& name_or_path) {
  NetworkSource src;
  src.given = name_or_path;
  if (std::filesystem::exists(name_or_path)) {
    src.bundled = false;
    src.label = std::filesystem::path(name_or_path).stem().string();
    return src;
  }
  if (is_bundled_network(name_or_path)) {
    src.bundled = true;
    src.label = to_lower(name_or_path);
    return src;
  }
  std::string msg = "'" + name_or_path +
                    "' is neither a file nor a bundled network; bundled:";
  for (const auto& n : bundled_network_names()) msg += " " + n;
  throw ArgumentError(msg);
}

BayesianNetwork open_network(const NetworkSource& source) {
  if (source.bundled) return load_bundled(source.label);
  return parse_network_file(source.given);
}

}  // namespace chainminer
