#include "biasperm/bias_models.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "biasperm/errors.hpp"
#include "biasperm/slow_mixing.hpp"

namespace biasperm {

BiasTable constant_bias(int n, double p) {
  if (!(p >= 0.5 && p <= 1.0)) throw InvalidArgument("constant bias needs p in [1/2, 1]");
  BiasTable P(n);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) P.set(i, j, p);
  return P;
}

ChooseYourWeaponSpec ChooseYourWeaponSpec::as_min_indexed() const {
  if (variant == Variant::min_indexed) return *this;
  // p_ij = r_j for i < j becomes p'_{x,y} = r_{n+1-x} with x < y.
  ChooseYourWeaponSpec out;
  const int n = size();
  out.r.resize(r.size());
  for (int x = 1; x <= n - 1; ++x) out.r[x - 1] = r[(n + 1 - x) - 2];
  return out;
}

ChooseYourWeaponSpec ChooseYourWeaponSpec::truncated(int n) const {
  if (n < 1 || n - 1 > static_cast<int>(r.size())) {
    throw InvalidArgument("cyw model has " + std::to_string(r.size()) + " rates, too few for n = " + std::to_string(n));
  }
  ChooseYourWeaponSpec out = *this;
  out.r.resize(n - 1);
  return out;
}

BiasTable choose_your_weapon(const ChooseYourWeaponSpec& spec) {
  for (double v : spec.r)
    if (!(v >= 0.5 && v < 1.0)) throw InvalidArgument("cyw rates must lie in [1/2, 1)");
  const int n = spec.size();
  BiasTable P(n);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      P.set(i, j, spec.variant == ChooseYourWeaponSpec::Variant::min_indexed ? spec.r[i - 1] : spec.r[j - 2]);
  return P;
}

BiasTable league_hierarchy(const LeagueTree& T) {
  BiasTable P(T.size());
  for (int i = 1; i <= T.size(); ++i)
    for (int j = i + 1; j <= T.size(); ++j) P.set(i, j, T.q_of(i, j));
  return P;
}

std::string WeakMonotonicity::describe() const {
  if (!positively_biased) return "not positively biased";
  if (monotone()) return "monotone";
  if (row_clause) return "weakly monotone (row clause)";
  if (column_clause) return "weakly monotone (column clause)";
  return "not weakly monotone";
}

WeakMonotonicity is_weakly_monotone(const BiasTable& P) {
  const int n = P.size();
  WeakMonotonicity w;
  w.positively_biased = P.is_positively_biased();
  w.row_clause = true;
  w.column_clause = true;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      if (j + 1 <= n && P(i, j + 1) < P(i, j)) w.row_clause = false;
      if (i >= 2 && P(i - 1, j) < P(i, j)) w.column_clause = false;
    }
  }
  return w;
}

BiasTable mirrored(const BiasTable& P) {
  const int n = P.size();
  BiasTable M(n);
  for (int x = 1; x <= n; ++x)
    for (int y = x + 1; y <= n; ++y) M.set(x, y, P(n + 1 - y, n + 1 - x));
  return M;
}

std::vector<int> mirrored(const std::vector<int>& sigma) {
  const int n = static_cast<int>(sigma.size());
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = n + 1 - sigma[n - 1 - i];
  return out;
}

namespace {

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InvalidArgument("bad number in model spec: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

std::optional<int> ModelSpec::natural_size() const {
  switch (kind) {
    case Kind::cyw: return cyw.size();
    case Kind::league: return tree->size();
    case Kind::slowmix: return 2 * slowmix_n;
    case Kind::constant: return std::nullopt;
  }
  return std::nullopt;
}

ModelSpec parse_model(const std::string& text) {
  ModelSpec m;
  m.text = text;
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument("model spec needs kind:args, got '" + text + "'");
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  if (kind == "constant") {
    m.kind = ModelSpec::Kind::constant;
    m.p = parse_double(rest);
    if (!(m.p >= 0.5 && m.p <= 1.0)) throw InvalidArgument("constant bias needs p in [1/2, 1]");
  } else if (kind == "cyw") {
    m.kind = ModelSpec::Kind::cyw;
    auto parts = split(rest, ':');
    if (parts.empty() || parts.size() > 2) throw InvalidArgument("cyw spec is cyw:r1,r2,...[:max]");
    if (parts.size() == 2) {
      if (parts[1] == "max") m.cyw.variant = ChooseYourWeaponSpec::Variant::max_indexed;
      else if (parts[1] != "min") throw InvalidArgument("cyw variant must be min or max");
    }
    for (const auto& v : split(parts[0], ',')) m.cyw.r.push_back(parse_double(v));
    if (m.cyw.r.empty()) throw InvalidArgument("cyw needs at least one rate");
    choose_your_weapon(m.cyw);  // validates the rates
  } else if (kind == "league") {
    m.kind = ModelSpec::Kind::league;
    std::ifstream in(rest);
    if (!in) throw InvalidArgument("cannot read league tree file '" + rest + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    m.tree = LeagueTree::from_json(buf.str());
  } else if (kind == "slowmix") {
    m.kind = ModelSpec::Kind::slowmix;
    m.slowmix_n = static_cast<int>(parse_double(rest));
    if (m.slowmix_n < 4 || std::to_string(m.slowmix_n) != rest) throw InvalidArgument("slowmix needs an integer n >= 4");
  } else {
    throw InvalidArgument("unknown model kind '" + kind + "'");
  }
  return m;
}

BiasTable model_table(const ModelSpec& model, int n) {
  switch (model.kind) {
    case ModelSpec::Kind::constant: return constant_bias(n, model.p);
    case ModelSpec::Kind::cyw: return choose_your_weapon(model.cyw.truncated(n));
    case ModelSpec::Kind::league:
      if (model.tree->size() != n) {
        throw InvalidArgument("league tree has " + std::to_string(model.tree->size()) + " leaves but n = " + std::to_string(n));
      }
      return league_hierarchy(*model.tree);
    case ModelSpec::Kind::slowmix:
      if (2 * model.slowmix_n != n) throw InvalidArgument("slowmix:" + std::to_string(model.slowmix_n) + " has 2n labels");
      return slow_mixing_bias(model.slowmix_n).first;
  }
  throw InvalidArgument("unknown model");
}

std::optional<ChooseYourWeaponSpec> model_as_cyw(const ModelSpec& model, int n) {
  if (model.kind == ModelSpec::Kind::cyw) return model.cyw.truncated(n);
  if (model.kind == ModelSpec::Kind::constant && model.p < 1.0) {
    ChooseYourWeaponSpec s;
    s.r.assign(n - 1, model.p);
    return s;
  }
  return std::nullopt;
}

std::optional<LeagueTree> model_as_league(const ModelSpec& model, int n) {
  if (model.kind == ModelSpec::Kind::league) {
    if (model.tree->size() != n) return std::nullopt;
    return model.tree;
  }
  if (model.kind == ModelSpec::Kind::constant) return LeagueTree::complete(n, model.p);
  if (model.kind == ModelSpec::Kind::cyw) {
    // Min-indexed rates live on a right comb and max-indexed rates on a left comb.
    const auto spec = model.cyw.truncated(n);
    if (spec.variant == ChooseYourWeaponSpec::Variant::min_indexed) return LeagueTree::right_comb(spec.r);
    return LeagueTree::left_comb(spec.r);
  }
  return std::nullopt;
}

}  // namespace biasperm
