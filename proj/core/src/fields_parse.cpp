#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracheat/fields.hpp"

namespace fracheat::fields {

namespace {

std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// splits at top-level occurrences of `sep` (paren depth 0)
std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      parts.push_back(strip(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(strip(cur));
  return parts;
}

struct Call {
  std::string name;
  std::string body;
};

Call split_call(const std::string& text) {
  const std::string s = strip(text);
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')')
    throw std::invalid_argument("parse_field: expected name(...) in '" + s + "'");
  return {strip(s.substr(0, open)), s.substr(open + 1, s.size() - open - 2)};
}

double to_number(const std::string& s, const std::string& ctx) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("parse_field: bad number '" + s + "' in " + ctx);
  }
}

std::map<std::string, double> parse_kv(const std::string& body,
                                       const std::string& ctx) {
  std::map<std::string, double> kv;
  if (strip(body).empty()) return kv;
  for (const auto& part : split_top(body, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("parse_field: expected key=value in " + ctx);
    kv[strip(part.substr(0, eq))] = to_number(strip(part.substr(eq + 1)), ctx);
  }
  return kv;
}

double need(const std::map<std::string, double>& kv, const std::string& key,
            const std::string& ctx) {
  auto it = kv.find(key);
  if (it == kv.end())
    throw std::invalid_argument("parse_field: missing '" + key + "' in " + ctx);
  return it->second;
}

double get_or(const std::map<std::string, double>& kv, const std::string& key,
              double fallback) {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

// positional or key=value argument list for the blowup constructors
std::map<std::string, double> parse_args(const std::string& body,
                                         const std::vector<std::string>& names,
                                         const std::string& ctx) {
  if (body.find('=') != std::string::npos) return parse_kv(body, ctx);
  const auto parts = split_top(body, ',');
  if (parts.size() != names.size())
    throw std::invalid_argument("parse_field: " + ctx + " expects " +
                                std::to_string(names.size()) + " arguments");
  std::map<std::string, double> kv;
  for (std::size_t i = 0; i < names.size(); ++i)
    kv[names[i]] = to_number(parts[i], ctx);
  return kv;
}

// pull alpha/lambda from a child's textual parameters when rescale omits them
bool infer_alpha_lambda(const std::string& child_text, double& alpha,
                        double& lambda) {
  const Call call = split_call(child_text);
  if (call.name != "exact" && call.name != "tilted" && call.name != "indsim" &&
      call.name != "mollified")
    return false;
  const auto kv = parse_kv(call.body, call.name);
  if (!kv.count("alpha") || !kv.count("lambda")) return false;
  alpha = kv.at("alpha");
  lambda = kv.at("lambda");
  return true;
}

}  // namespace

std::optional<BlowupFamily> parse_blowup_family(const std::string& text) {
  const Call call = split_call(text);
  if (call.name == "blowup_small") {
    const auto kv = parse_args(call.body, {"n", "p", "lambda", "alpha", "q", "J"},
                               "blowup_small");
    return make_blowup_small_time(
        static_cast<int>(need(kv, "n", "blowup_small")), need(kv, "p", "blowup_small"),
        need(kv, "lambda", "blowup_small"), need(kv, "alpha", "blowup_small"),
        need(kv, "q", "blowup_small"),
        static_cast<int>(need(kv, "J", "blowup_small")));
  }
  if (call.name == "blowup_large") {
    const auto kv =
        parse_args(call.body, {"n", "p", "lambda", "alpha", "J"}, "blowup_large");
    return make_blowup_large_time(
        static_cast<int>(need(kv, "n", "blowup_large")), need(kv, "p", "blowup_large"),
        need(kv, "lambda", "blowup_large"), need(kv, "alpha", "blowup_large"),
        static_cast<int>(need(kv, "J", "blowup_large")));
  }
  return std::nullopt;
}

Field parse_field(const std::string& text) {
  const Call call = split_call(text);
  const std::string& name = call.name;

  if (name == "exact") {
    const auto kv = parse_kv(call.body, name);
    return make_exact_solution(need(kv, "alpha", name), need(kv, "lambda", name));
  }
  if (name == "mollified") {
    const auto kv = parse_kv(call.body, name);
    return make_mollified_exact(need(kv, "alpha", name), need(kv, "lambda", name),
                                need(kv, "delta", name));
  }
  if (name == "tilted") {
    const auto kv = parse_kv(call.body, name);
    return make_tilted_exact(need(kv, "alpha", name), need(kv, "lambda", name),
                             need(kv, "N", name), need(kv, "K", name),
                             static_cast<int>(get_or(kv, "n", 1)));
  }
  if (name == "paraboloid") {
    const auto kv = parse_kv(call.body, name);
    const double tmax = get_or(kv, "tmax", 0.0);
    if (tmax != 0.0 && tmax != 1.0)
      throw std::invalid_argument("parse_field: paraboloid supports tmax=1 only");
    return make_paraboloid_power(static_cast<int>(need(kv, "n", name)),
                                 need(kv, "p", name), need(kv, "gamma", name),
                                 tmax == 1.0);
  }
  if (name == "backward") {
    const auto kv = parse_kv(call.body, name);
    return make_backward_paraboloid(static_cast<int>(need(kv, "n", name)),
                                    need(kv, "p", name), need(kv, "gamma", name),
                                    need(kv, "t0", name), need(kv, "T", name));
  }
  if (name == "indsim") {
    const auto kv = parse_kv(call.body, name);
    return make_indicator_similarity(static_cast<int>(need(kv, "n", name)),
                                     need(kv, "alpha", name),
                                     need(kv, "lambda", name));
  }
  if (name == "blowup_small" || name == "blowup_large") {
    return parse_blowup_family(text)->field();
  }
  if (name == "sum") {
    std::vector<Field> children;
    for (const auto& part : split_top(call.body, ';'))
      children.push_back(parse_field(part));
    return make_sum(std::move(children));
  }
  if (name == "rescale") {
    const auto parts = split_top(call.body, ',');
    if (parts.size() < 2)
      throw std::invalid_argument("parse_field: rescale(F,K=...,T=...)");
    Field child = parse_field(parts[0]);
    std::string rest;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      if (i > 1) rest += ",";
      rest += parts[i];
    }
    const auto kv = parse_kv(rest, name);
    double alpha = get_or(kv, "alpha", -1.0);
    double lambda = get_or(kv, "lambda", -1.0);
    if (alpha < 0.0 || lambda < 0.0) {
      double ia, il;
      if (!infer_alpha_lambda(parts[0], ia, il))
        throw std::invalid_argument(
            "parse_field: rescale needs lambda=,alpha= for this child");
      if (alpha < 0.0) alpha = ia;
      if (lambda < 0.0) lambda = il;
    }
    return rescale(std::move(child), get_or(kv, "K", 1.0), lambda, alpha,
                   get_or(kv, "T", 1.0));
  }
  if (name == "scaled") {
    const auto parts = split_top(call.body, ',');
    if (parts.size() != 2)
      throw std::invalid_argument("parse_field: scaled(F,c=...)");
    const auto kv = parse_kv(parts[1], name);
    return make_scaled(parse_field(parts[0]), need(kv, "c", name));
  }
  if (name == "sampled") {
    return make_sampled(read_sampled_csv(strip(call.body)));
  }
  if (name == "bump") {
    const auto kv = parse_kv(call.body, name);
    return make_smooth_bump(static_cast<int>(get_or(kv, "n", 1)));
  }
  if (name == "step") return make_unit_step();
  if (name == "zero") return make_zero(1);

  throw std::invalid_argument("parse_field: unknown field '" + name + "'");
}

}  // namespace fracheat::fields
