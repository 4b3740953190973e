#include "chainminer/rules_csv.hpp"

#include <charconv>
#include <sstream>

#include "chainminer/error.hpp"

namespace chainminer {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string header_line(const BayesianNetwork& net, int target) {
  std::string h;
  for (int v = 0; v < net.num_variables(); ++v) {
    if (v == target) continue;
    if (!h.empty()) h += ",";
    h += net.variable(v).name;
  }
  h += "," + net.variable(target).name + ",probability";
  return h;
}

}  // namespace

std::string rules_to_csv(const std::vector<ScoredRule>& rules,
                         const BayesianNetwork& net, int target) {
  if (target < 0 || target >= net.num_variables()) {
    throw ArgumentError("target id " + std::to_string(target) +
                        " out of range");
  }
  std::ostringstream out;
  out << header_line(net, target) << "\n";
  for (const ScoredRule& sr : rules) {
    for (int v = 0; v < net.num_variables(); ++v) {
      if (v == target) continue;
      const std::int8_t g = sr.rule.genes[static_cast<std::size_t>(v)];
      if (g == Rule::kNeutralGene) {
        out << "*";
      } else {
        out << net.variable(v).states[static_cast<std::size_t>(g)];
      }
      out << ",";
    }
    out << net.variable(target)
               .states[static_cast<std::size_t>(sr.rule.target_state)]
        << "," << format_double(sr.probability) << "\n";
  }
  return out.str();
}

std::vector<ScoredRule> rules_from_csv(const std::string& text,
                                       const BayesianNetwork& net,
                                       int target) {
  if (target < 0 || target >= net.num_variables()) {
    throw ArgumentError("target id " + std::to_string(target) +
                        " out of range");
  }
  std::vector<ScoredRule> rules;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  const std::string expected_header = header_line(net, target);
  const std::size_t num_fields =
      static_cast<std::size_t>(net.num_variables()) + 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != expected_header) {
        throw ParseError("header does not match the network and target",
                         line_no, 1);
      }
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != num_fields) {
      throw ParseError("expected " + std::to_string(num_fields) +
                           " fields, found " + std::to_string(fields.size()),
                       line_no, 1);
    }
    ScoredRule sr;
    sr.rule.genes.assign(static_cast<std::size_t>(net.num_variables()),
                         Rule::kNeutralGene);
    std::size_t f = 0;
    for (int v = 0; v < net.num_variables(); ++v) {
      if (v == target) continue;
      const std::string& cell = fields[f++];
      if (cell != "*") {
        const auto s = net.variable(v).state_index(cell);
        if (!s) {
          throw ParseError("'" + cell + "' is not a state of '" +
                               net.variable(v).name + "'",
                           line_no, 1);
        }
        sr.rule.genes[static_cast<std::size_t>(v)] =
            static_cast<std::int8_t>(*s);
      }
    }
    const auto ts = net.variable(target).state_index(fields[f]);
    if (!ts) {
      throw ParseError("'" + fields[f] + "' is not a state of '" +
                           net.variable(target).name + "'",
                       line_no, 1);
    }
    sr.rule.target_state = static_cast<std::int8_t>(*ts);
    ++f;
    const std::string& num = fields[f];
    const auto res = std::from_chars(num.data(), num.data() + num.size(),
                                     sr.probability);
    if (res.ec != std::errc{} || res.ptr != num.data() + num.size()) {
      throw ParseError("malformed probability '" + num + "'", line_no, 1);
    }
    rules.push_back(std::move(sr));
  }
  if (line_no == 0) {
    throw ParseError("empty rule table", 1, 1);
  }
  return rules;
}

std::string trace_to_csv(const GaTrace& trace) {
  std::ostringstream out;
  out << "generation,best_fitness,mean_fitness,best_size\n";
  for (const GenerationRecord& r : trace.records) {
    out << r.generation << "," << format_double(r.best_fitness) << ","
        << format_double(r.mean_fitness) << "," << r.best_size << "\n";
  }
  return out.str();
}

}  // namespace chainminer
