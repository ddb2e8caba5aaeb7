#include "hmr/builtins.hpp"

#include <map>
#include <stdexcept>

#include "hmr/errors.hpp"

namespace hmr {

namespace {

std::map<std::string, std::string> parse_params(const std::string& text,
                                                const std::string& spec) {
  std::map<std::string, std::string> out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    const size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= item.size())
      throw MapParseError("builtin '" + spec + "': malformed parameter '" + item +
                          "' (expected k=v)");
    out[item.substr(0, eq)] = item.substr(eq + 1);
    pos = comma + 1;
  }
  return out;
}

int int_param(const std::map<std::string, std::string>& params, const std::string& key,
              const std::string& spec) {
  const auto it = params.find(key);
  if (it == params.end())
    throw MapParseError("builtin '" + spec + "': missing parameter '" + key + "'");
  try {
    size_t used = 0;
    const int v = std::stoi(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw MapParseError("builtin '" + spec + "': parameter '" + key +
                        "' is not an integer: '" + it->second + "'");
  }
}

double real_param(const std::map<std::string, std::string>& params, const std::string& key,
                  const std::string& spec) {
  const auto it = params.find(key);
  if (it == params.end())
    throw MapParseError("builtin '" + spec + "': missing parameter '" + key + "'");
  try {
    size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw MapParseError("builtin '" + spec + "': parameter '" + key +
                        "' is not a number: '" + it->second + "'");
  }
}

void check_keys(const std::map<std::string, std::string>& params,
                std::initializer_list<const char*> allowed, const std::string& spec) {
  for (const auto& [k, v] : params) {
    bool ok = false;
    for (const char* a : allowed)
      if (k == a) ok = true;
    if (!ok) throw MapParseError("builtin '" + spec + "': unknown parameter '" + k + "'");
  }
}

constexpr int kMaxDegree = 12;

}  // namespace

RationalMap builtin_map(const std::string& spec, const Tolerances& tol) {
  const size_t colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const auto params = colon == std::string::npos
                          ? std::map<std::string, std::string>{}
                          : parse_params(spec.substr(colon + 1), spec);

  if (name == "example-4.1") {
    check_keys(params, {}, spec);
    return RationalMap(ComplexPoly({cx{1.0}}),
                       ComplexPoly({cx{3.0}, cx{-1.0}, cx{-1.0}}), tol);
  }
  if (name == "example-4.2") {
    check_keys(params, {}, spec);
    return RationalMap(ComplexPoly({cx{0.0}, cx{0.0}, cx{1.0}}),
                       ComplexPoly({cx{3.0}, cx{-1.0}, cx{-1.0}}), tol);
  }
  if (name == "blaschke-2.6") {
    check_keys(params, {}, spec);
    return RationalMap(ComplexPoly({cx{0.0}, cx{1.0}, cx{-2.0}}),
                       ComplexPoly({cx{2.0}, cx{-1.0}}), tol);
  }
  if (name == "family-5.3") {
    check_keys(params, {"d"}, spec);
    const int d = int_param(params, "d", spec);
    if (d < 1 || d > kMaxDegree)
      throw MapParseError("builtin '" + spec + "': d must be in 1.." +
                          std::to_string(kMaxDegree));
    std::vector<cx> den(static_cast<size_t>(d) + 1, cx{-1.0});
    den[0] = cx{static_cast<double>(d) + 1.0};
    return RationalMap(ComplexPoly({cx{1.0}}), ComplexPoly(std::move(den)), tol);
  }
  if (name == "z-pow") {
    check_keys(params, {"n"}, spec);
    const int n = int_param(params, "n", spec);
    if (n < 1 || n > kMaxDegree)
      throw MapParseError("builtin '" + spec + "': n must be in 1.." +
                          std::to_string(kMaxDegree));
    return RationalMap(ComplexPoly::monomial(n), ComplexPoly({cx{1.0}}), tol);
  }
  if (name == "z-over-a-minus-zn") {
    check_keys(params, {"a", "n"}, spec);
    const double a = real_param(params, "a", spec);
    const int n = int_param(params, "n", spec);
    if (n < 1 || n > kMaxDegree)
      throw MapParseError("builtin '" + spec + "': n must be in 1.." +
                          std::to_string(kMaxDegree));
    std::vector<cx> den(static_cast<size_t>(n) + 1, cx{0.0});
    den[0] = cx{a};
    den[static_cast<size_t>(n)] = cx{-1.0};
    return RationalMap(ComplexPoly({cx{0.0}, cx{1.0}}), ComplexPoly(std::move(den)), tol);
  }
  throw MapParseError("unknown builtin map '" + spec + "'");
}

std::vector<std::string> builtin_names() {
  return {"example-4.1",       "example-4.2", "blaschke-2.6",
          "family-5.3:d=<int>", "z-pow:n=<int>",
          "z-over-a-minus-zn:a=<real>,n=<int>"};
}

}  // namespace hmr
