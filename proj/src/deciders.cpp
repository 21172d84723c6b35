#include "keysub/deciders.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>

namespace keysub {

namespace {

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

// Splits at `sep` outside parentheses.
std::vector<std::string> split_top_level(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string current;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  out.push_back(current);
  return out;
}

std::string unwrap(const std::string& s, const std::string& head) {
  if (s.size() < head.size() + 2 || s.compare(0, head.size() + 1, head + "(") != 0 || s.back() != ')')
    throw ParseError("expected " + head + "(...), got '" + s + "'");
  return s.substr(head.size() + 1, s.size() - head.size() - 2);
}

std::vector<ExtModulus> hausdorff_moduli(const SearchBox& box) {
  std::vector<ExtModulus> out;
  for (auto& m : enumerate_moduli(box.primes, box.exp_cap, true))
    if (m.is_omega() || m.is_infinite()) out.push_back(std::move(m));
  return out;
}

// All tuples over `choices[i]`, first coordinate slowest.
template <class T, class Fn>
void for_each_tuple(const std::vector<std::vector<T>>& choices, Fn&& fn) {
  for (const auto& c : choices)
    if (c.empty()) return;
  std::vector<std::size_t> digits(choices.size(), 0);
  std::vector<T> current;
  while (true) {
    current.clear();
    for (std::size_t k = 0; k < choices.size(); ++k) current.push_back(choices[k][digits[k]]);
    if (!fn(current)) return;
    std::size_t pos = choices.size();
    bool exhausted = true;
    while (pos-- > 0) {
      if (++digits[pos] < choices[pos].size()) {
        exhausted = false;
        break;
      }
      digits[pos] = 0;
    }
    if (exhausted) return;
  }
}

std::string join_moduli(const std::vector<ExtModulus>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + v[k].to_string();
  return out;
}

void require_gamma(const GradedAdicTopology& gamma, const SearchBox& box) {
  if (gamma.carrier() != GradedAdicTopology::Carrier::Unitriangular)
    throw std::invalid_argument("gamma must be a topology on UT(n, Z)");
  std::string reason;
  if (!satisfies_axioms(gamma, &reason)) throw std::invalid_argument("gamma is not admissible: " + reason);
  if (!is_hausdorff(gamma).hausdorff) throw std::invalid_argument("gamma must be Hausdorff: " + gamma.to_literal());
  if (!gamma.supported_by(box.primes) || gamma.max_finite_exponent() > box.exp_cap)
    throw std::invalid_argument(gamma.to_literal() + " lies outside the search box " + box.to_string());
}

void require_supported(const SubgroupSpec& h, int n) {
  h.check_degree(n);
  if (h.kind() == SubgroupSpec::Kind::GradedCongruence)
    throw std::invalid_argument("deciders do not support " + h.to_string());
}

std::size_t member_count_estimate(const SubgroupSpec& h, int n, const BigInt& l) {
  const auto gens = subgroup_generators(n, RingSpec::residues(l), h);
  double count = 1;
  for (std::size_t k = 0; k < gens.size(); ++k) count *= l.get_d();
  return count > 1e12 ? static_cast<std::size_t>(-1) : static_cast<std::size_t>(count);
}

// Compares coset topologies on G/H with gamma: closed form for normal H,
// saturation oracle otherwise.
class CosetComparator {
 public:
  CosetComparator(const SubgroupSpec& h, const GradedAdicTopology& gamma, const SearchBox& box)
      : h_(h), gamma_(gamma), box_(box), normal_(h.is_normal(gamma.degree())) {
    if (normal_) {
      gamma_quotient_ = quotient(gamma, h);
    } else {
      oracle_.emplace(gamma.degree(), box.truncation, h);
    }
  }

  bool normal() const { return normal_; }

  bool equal(const GradedAdicTopology& t) {
    if (normal_) return quotient(t, h_) == *gamma_quotient_;
    return coset_filters_equal(*oracle_, t, gamma_, box_);
  }

 private:
  SubgroupSpec h_;
  GradedAdicTopology gamma_;
  SearchBox box_;
  bool normal_;
  std::optional<GradedAdicTopology> gamma_quotient_;
  std::optional<SaturationOracle> oracle_;
};

VerdictReport base_report(std::string property, const SubgroupSpec& h, const GradedAdicTopology& gamma,
                          const DeciderConfig& config) {
  VerdictReport report;
  report.property = std::move(property);
  report.subject = h.to_string();
  report.gamma = gamma.to_literal();
  report.box = config.box;
  return report;
}

void finish(VerdictReport& report, std::size_t candidates, std::size_t total_witnesses, const DeciderConfig& config) {
  report.notes.push_back(std::to_string(candidates) + " coarser Hausdorff candidates in the box");
  if (report.witnesses.empty()) {
    report.verdict = Verdict::Holds;
    report.notes.push_back("holds within the admissible family for " + config.box.to_string());
  } else {
    report.verdict = Verdict::Fails;
    if (total_witnesses > report.witnesses.size())
      report.notes.push_back(std::to_string(total_witnesses) + " witnesses found, first " +
                             std::to_string(report.witnesses.size()) + " reported");
  }
}

// Collects candidates c with pred(c), verifying each reported witness.
template <class Pred>
VerdictReport single_witness_decider(std::string property, const SubgroupSpec& h, const GradedAdicTopology& gamma,
                                     const DeciderConfig& config, Pred&& pred) {
  require_gamma(gamma, config.box);
  require_supported(h, gamma.degree());
  VerdictReport report = base_report(property, h, gamma, config);
  const auto candidates = coarser_candidates(gamma, config);
  std::size_t total = 0;
  for (const auto& c : candidates) {
    if (!pred(c)) continue;
    ++total;
    if (report.witnesses.size() >= config.max_witnesses) continue;
    const std::string literal = c.to_literal();
    if (!verify_witness(property, h, gamma, literal, config))
      throw std::logic_error("witness " + literal + " failed re-verification for " + property);
    report.witnesses.push_back(literal);
  }
  finish(report, candidates.size(), total, config);
  return report;
}

}  // namespace

std::vector<GradedAdicTopology> hausdorff_family(int n, const DeciderConfig& config) {
  if (n < 2) throw std::invalid_argument("unitriangular degree must be >= 2");
  const auto moduli = hausdorff_moduli(config.box);
  std::vector<GradedAdicTopology> out;
  ValidateOptions options;
  options.trials = config.oracle_trials;
  options.seed = config.seed;
  for_each_tuple(std::vector<std::vector<ExtModulus>>(n - 1, moduli), [&](const std::vector<ExtModulus>& levels) {
    GradedAdicTopology t(n, levels);
    if (!satisfies_axioms(t)) return true;
    if (validate(t, options).verdict != Verdict::Holds) throw std::logic_error("oracle rejects " + t.to_literal());
    out.push_back(std::move(t));
    return true;
  });
  return out;
}

std::vector<GradedAdicTopology> coarser_candidates(const GradedAdicTopology& gamma, const DeciderConfig& config) {
  require_gamma(gamma, config.box);
  std::vector<GradedAdicTopology> out;
  for (auto& t : hausdorff_family(gamma.degree(), config))
    if (is_coarser(t, gamma)) out.push_back(std::move(t));
  return out;
}

VerdictReport decide_key(const SubgroupSpec& h, const GradedAdicTopology& gamma, const DeciderConfig& config) {
  const GradedAdicTopology target = restrict(gamma, h);
  return single_witness_decider("key", h, gamma, config,
                                [&](const GradedAdicTopology& c) { return !(c == gamma) && restrict(c, h) == target; });
}

VerdictReport decide_relatively_minimal(const SubgroupSpec& h, const GradedAdicTopology& gamma, const DeciderConfig& config) {
  const GradedAdicTopology target = restrict(gamma, h);
  return single_witness_decider("relmin", h, gamma, config,
                                [&](const GradedAdicTopology& c) { return !(restrict(c, h) == target); });
}

VerdictReport decide_cokey(const SubgroupSpec& h, const GradedAdicTopology& gamma, const DeciderConfig& config) {
  require_gamma(gamma, config.box);
  CosetComparator cosets(h, gamma, config.box);
  VerdictReport report = single_witness_decider(
      "cokey", h, gamma, config, [&](const GradedAdicTopology& c) { return !(c == gamma) && cosets.equal(c); });
  if (!cosets.normal()) report.notes.push_back("coset topologies compared by saturation at L=" + config.box.truncation.get_str());
  return report;
}

VerdictReport decide_cominimal(const SubgroupSpec& h, const GradedAdicTopology& gamma, const DeciderConfig& config) {
  require_gamma(gamma, config.box);
  CosetComparator cosets(h, gamma, config.box);
  VerdictReport report =
      single_witness_decider("cominimal", h, gamma, config, [&](const GradedAdicTopology& c) { return !cosets.equal(c); });
  if (!cosets.normal()) report.notes.push_back("coset topologies compared by saturation at L=" + config.box.truncation.get_str());
  return report;
}

VerdictReport decide_injkey(const SubgroupSpec& h, const GradedAdicTopology& gamma, const DeciderConfig& config) {
  require_gamma(gamma, config.box);
  require_supported(h, gamma.degree());
  VerdictReport report = base_report("injkey", h, gamma, config);
  const auto candidates = coarser_candidates(gamma, config);
  std::map<GradedAdicTopology, std::size_t> first_with_image;
  std::size_t total = 0;
  for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
    const auto image = restrict(candidates[idx], h);
    auto [it, inserted] = first_with_image.emplace(image, idx);
    if (inserted) continue;
    ++total;
    if (report.witnesses.size() >= config.max_witnesses) continue;
    const std::string literal = pair_literal(candidates[it->second], candidates[idx]);
    if (!verify_witness("injkey", h, gamma, literal, config))
      throw std::logic_error("witness " + literal + " failed re-verification for injkey");
    report.witnesses.push_back(literal);
  }
  finish(report, candidates.size(), total, config);
  return report;
}

VerdictReport decide(std::string_view property, const SubgroupSpec& h, const GradedAdicTopology& gamma,
                     const DeciderConfig& config) {
  if (property == "key") return decide_key(h, gamma, config);
  if (property == "cokey") return decide_cokey(h, gamma, config);
  if (property == "relmin") return decide_relatively_minimal(h, gamma, config);
  if (property == "cominimal") return decide_cominimal(h, gamma, config);
  if (property == "injkey") return decide_injkey(h, gamma, config);
  throw std::invalid_argument("unknown property '" + std::string(property) + "'");
}

MersonHypotheses merson_hypotheses(const GradedAdicTopology& t1, const GradedAdicTopology& t, const SubgroupSpec& h,
                                   const SearchBox& box) {
  MersonHypotheses out{restrict(t1, h) == restrict(t, h), false};
  if (h.is_normal(t.degree())) {
    out.same_coset_topology = quotient(t1, h) == quotient(t, h);
  } else {
    SaturationOracle oracle(t.degree(), box.truncation, h);
    out.same_coset_topology = coset_filters_equal(oracle, t1, t, box);
  }
  return out;
}

VerdictReport merson_check(const GradedAdicTopology& t1, const GradedAdicTopology& t, const SubgroupSpec& h,
                           const SearchBox& box) {
  if (!is_coarser(t1, t)) throw std::invalid_argument(t1.to_literal() + " is not coarser than " + t.to_literal());
  VerdictReport report;
  report.property = "merson";
  report.subject = h.to_string();
  report.gamma = t.to_literal();
  report.box = box;
  const auto hyp = merson_hypotheses(t1, t, h, box);
  if (!hyp.same_restriction || !hyp.same_coset_topology) {
    report.verdict = Verdict::Vacuous;
    report.notes.push_back(!hyp.same_restriction ? "restrictions to the subgroup differ" : "coset topologies differ");
    return report;
  }
  if (t1 == t) {
    report.verdict = Verdict::Holds;
    return report;
  }
  report.verdict = Verdict::Fails;
  report.witnesses.push_back(pair_literal(t1, t));
  return report;
}

VerdictReport merson_exhaustive(int n, const SubgroupSpec& h, const DeciderConfig& config) {
  require_supported(h, n);
  VerdictReport report;
  report.property = "merson";
  report.subject = h.to_string();
  report.gamma = "family";
  report.box = config.box;
  const auto family = hausdorff_family(n, config);
  const bool normal = h.is_normal(n);
  std::optional<SaturationOracle> oracle;
  if (!normal) oracle.emplace(n, config.box.truncation, h);
  std::size_t pairs = 0, both = 0;
  for (const auto& t : family)
    for (const auto& t1 : family) {
      if (!is_coarser(t1, t)) continue;
      ++pairs;
      if (!(restrict(t1, h) == restrict(t, h))) continue;
      const bool cosets = normal ? quotient(t1, h) == quotient(t, h) : coset_filters_equal(*oracle, t1, t, config.box);
      if (!cosets) continue;
      ++both;
      if (!(t1 == t) && report.witnesses.size() < config.max_witnesses) report.witnesses.push_back(pair_literal(t1, t));
    }
  report.verdict = report.witnesses.empty() ? Verdict::Holds : Verdict::Fails;
  report.notes.push_back(std::to_string(family.size()) + " Hausdorff family members, " + std::to_string(pairs) +
                         " comparable pairs, " + std::to_string(both) + " satisfy both hypotheses");
  if (report.witnesses.empty()) report.notes.push_back("holds within the admissible family for " + config.box.to_string());
  return report;
}

std::string ModulusTriple::to_literal() const {
  return "triple(" + join_moduli(sigma) + "; " + join_moduli(tau) + "; " + nu.to_string() + ")";
}

ModulusTriple ModulusTriple::parse(std::string_view text, const PrimeSet* allowed) {
  const auto parts = split_top_level(unwrap(strip_spaces(text), "triple"), ';');
  if (parts.size() != 3) throw ParseError("triple literal needs three slots: triple(sigma; tau; nu)");
  ModulusTriple out;
  for (const auto& item : split_top_level(parts[0], ',')) out.sigma.push_back(ExtModulus::parse(item, allowed));
  for (const auto& item : split_top_level(parts[1], ',')) out.tau.push_back(ExtModulus::parse(item, allowed));
  out.nu = ExtModulus::parse(parts[2], allowed);
  return out;
}

ModulusTriple triple_of(const GradedAdicTopology& t) {
  if (t.carrier() != GradedAdicTopology::Carrier::Unitriangular || t.degree() != 3)
    throw std::invalid_argument("triple_of needs a topology on UT(3, Z)");
  return {{t.level(1)}, {t.level(1)}, t.level(2)};
}

CompatibilityResult triple_compatible(const ModulusTriple& triple, const BiadditiveMap& w, std::uint64_t seed,
                                      int spot_checks) {
  const int dim = w.dot_product_dim();
  if (dim == 0) throw std::invalid_argument("compatibility is decided for the dot-product family only");
  if (w.ring().is_finite()) throw std::invalid_argument("adic topologies live on maps over Z");
  if (static_cast<int>(triple.sigma.size()) != dim || static_cast<int>(triple.tau.size()) != dim)
    throw std::invalid_argument("triple dimensions do not match " + w.to_string());

  auto unit_point = [&](bool on_y, int i) {
    std::string zeros, unit;
    for (int k = 0; k < dim; ++k) {
      zeros += (k ? "," : "") + std::string("0");
      unit += (k ? "," : "") + std::string(k == i ? "1" : "0");
    }
    return on_y ? "point(x=" + zeros + "; y=" + unit + ")" : "point(x=" + unit + "; y=" + zeros + ")";
  };
  for (int i = 0; i < dim; ++i) {
    if (!ext_divides(triple.nu, triple.sigma[i])) return {false, unit_point(true, i)};
    if (!ext_divides(triple.nu, triple.tau[i])) return {false, unit_point(false, i)};
  }

  // Spot-check: near random (x0, y0), U_k-small perturbations move w by a nu_k-small amount.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coord(-20, 20);
  std::uniform_int_distribution<unsigned> level(0, 4);
  for (int trial = 0; trial < spot_checks; ++trial) {
    const Exponent k = level(rng);
    Vec x0(dim), y0(dim), x1(dim), y1(dim);
    for (int i = 0; i < dim; ++i) {
      x0[i] = coord(rng);
      y0[i] = coord(rng);
      x1[i] = x0[i] + capped_part(triple.sigma[i], k) * coord(rng);
      y1[i] = y0[i] + capped_part(triple.tau[i], k) * coord(rng);
    }
    const BigInt diff = w.evaluate(x1, y1)[0] - w.evaluate(x0, y0)[0];
    if (!int_divides(capped_part(triple.nu, k), diff))
      throw std::logic_error("compatibility rule refuted at a sampled point for " + triple.to_literal());
  }
  return {true, ""};
}

namespace {

VerdictReport map_minimality(bool strongly, const BiadditiveMap& w, const ModulusTriple& original,
                             const DeciderConfig& config) {
  VerdictReport report;
  report.property = strongly ? "strongly-minimal-map" : "minimal-map";
  report.subject = w.to_string();
  report.gamma = original.to_literal();
  report.box = config.box;
  if (!triple_compatible(original, w, config.seed).compatible)
    throw std::invalid_argument("the original triple does not make " + w.to_string() + " continuous");

  const auto moduli = hausdorff_moduli(config.box);
  auto below = [&](const ExtModulus& top) {
    std::vector<ExtModulus> out;
    for (const auto& m : moduli)
      if (ext_divides(m, top)) out.push_back(m);
    return out;
  };
  std::vector<std::vector<ExtModulus>> sigma_choices, tau_choices;
  for (const auto& s : original.sigma) sigma_choices.push_back(below(s));
  for (const auto& t : original.tau) tau_choices.push_back(below(t));
  const std::vector<ExtModulus> nu_choices = strongly ? below(original.nu) : std::vector<ExtModulus>{original.nu};

  std::size_t examined = 0, total = 0;
  for_each_tuple(sigma_choices, [&](const std::vector<ExtModulus>& sigma) {
    for_each_tuple(tau_choices, [&](const std::vector<ExtModulus>& tau) {
      for (const auto& nu : nu_choices) {
        ++examined;
        if (sigma == original.sigma && tau == original.tau) continue;
        ModulusTriple candidate{sigma, tau, nu};
        if (!triple_compatible(candidate, w, config.seed, 4).compatible) continue;
        ++total;
        if (report.witnesses.size() < config.max_witnesses) report.witnesses.push_back(candidate.to_literal());
      }
      return true;
    });
    return true;
  });
  report.verdict = report.witnesses.empty() ? Verdict::Holds : Verdict::Fails;
  report.notes.push_back(std::to_string(examined) + " coarser Hausdorff triples examined");
  if (report.witnesses.empty())
    report.notes.push_back("holds within the admissible family for " + config.box.to_string());
  else if (total > report.witnesses.size())
    report.notes.push_back(std::to_string(total) + " witnesses found, first " + std::to_string(report.witnesses.size()) +
                           " reported");
  return report;
}

}  // namespace

VerdictReport is_minimal_map(const BiadditiveMap& w, const ModulusTriple& original, const DeciderConfig& config) {
  return map_minimality(false, w, original, config);
}

VerdictReport is_strongly_minimal_map(const BiadditiveMap& w, const ModulusTriple& original, const DeciderConfig& config) {
  return map_minimality(true, w, original, config);
}

MapTable restriction_map_table(const SubgroupSpec& h, const GradedAdicTopology& gamma, const DeciderConfig& config) {
  require_gamma(gamma, config.box);
  require_supported(h, gamma.degree());
  MapTable table;
  table.report = base_report("restriction-map", h, gamma, config);
  const auto candidates = coarser_candidates(gamma, config);
  for (const auto& c : candidates) table.rows.emplace_back(c, restrict(c, h));

  std::map<GradedAdicTopology, std::size_t> images;
  for (const auto& [source, image] : table.rows) ++images[image];
  for (const auto& [image, count] : images)
    if (count > 1) table.injective = false;

  for (std::size_t a = 0; a < candidates.size(); ++a)
    for (std::size_t b = a; b < candidates.size(); ++b) {
      const auto joined = sup_topology(candidates[a], candidates[b]);
      const auto lhs = sup_topology(table.rows[a].second, table.rows[b].second);
      const auto rhs = restrict(joined, h);
      if (!(lhs == rhs)) {
        table.morphism = false;
        table.violations.push_back(pair_literal(candidates[a], candidates[b]));
      }
    }

  // Surjectivity onto the Hausdorff topologies of the subgroup that lie
  // below r_H(gamma) inside the box.
  const auto top = restrict(gamma, h);
  const auto moduli = hausdorff_moduli(config.box);
  for_each_tuple(std::vector<std::vector<ExtModulus>>(top.size(), moduli), [&](const std::vector<ExtModulus>& levels) {
    for (std::size_t k = 0; k < levels.size(); ++k)
      if (!ext_divides(levels[k], top.levels()[k])) return true;
    bool hit = false;
    for (const auto& [image, count] : images) hit = hit || image.levels() == levels;
    if (!hit) table.surjective = false;
    return true;
  });

  table.report.verdict = table.morphism ? Verdict::Holds : Verdict::Fails;
  table.report.witnesses = table.violations;
  if (table.report.witnesses.size() > config.max_witnesses) table.report.witnesses.resize(config.max_witnesses);
  table.report.notes.push_back(std::to_string(table.rows.size()) + " rows; sup law checked on " +
                               std::to_string(table.rows.size() * (table.rows.size() + 1) / 2) + " pairs");
  table.report.notes.push_back(std::string("injective: ") + (table.injective ? "yes" : "no") +
                               ", surjective onto the enumerated fragment: " + (table.surjective ? "yes" : "no"));
  return table;
}

std::string pair_literal(const GradedAdicTopology& a, const GradedAdicTopology& b) {
  return "pair(" + a.to_literal() + "; " + b.to_literal() + ")";
}

std::pair<GradedAdicTopology, GradedAdicTopology> parse_pair(std::string_view text, const PrimeSet* allowed) {
  const auto parts = split_top_level(unwrap(strip_spaces(text), "pair"), ';');
  if (parts.size() != 2) throw ParseError("pair literal needs two topologies");
  return {GradedAdicTopology::parse(parts[0], allowed), GradedAdicTopology::parse(parts[1], allowed)};
}

bool verify_witness(std::string_view property, const SubgroupSpec& h, const GradedAdicTopology& gamma,
                    std::string_view witness, const DeciderConfig& config) {
  auto member = [&](const GradedAdicTopology& t) {
    return t.carrier() == gamma.carrier() && t.degree() == gamma.degree() && satisfies_axioms(t) &&
           is_hausdorff(t).hausdorff && is_coarser(t, gamma);
  };
  // Coset equality by closed form, cross-checked by the oracle when small enough.
  auto same_cosets = [&](const GradedAdicTopology& t) {
    const int n = gamma.degree();
    const bool normal = h.is_normal(n);
    const bool feasible = member_count_estimate(h, n, config.box.truncation) <= 20000;
    std::optional<bool> oracle;
    if (feasible || !normal) {
      SaturationOracle o(n, config.box.truncation, h);
      oracle = coset_filters_equal(o, t, gamma, config.box);
    }
    if (!normal) return *oracle;
    const bool closed = quotient(t, h) == quotient(gamma, h);
    if (oracle && *oracle != closed)
      throw std::logic_error("quotient closed form and saturation oracle disagree on " + t.to_literal());
    return closed;
  };
  try {
    if (property == "injkey" || property == "merson") {
      auto [a, b] = parse_pair(witness);
      if (property == "injkey")
        return member(a) && member(b) && !(a == b) && restrict(a, h) == restrict(b, h);
      return is_coarser(a, b) && !(a == b) && restrict(a, h) == restrict(b, h) && same_cosets(a);
    }
    const auto t = GradedAdicTopology::parse(witness);
    if (!member(t)) return false;
    if (property == "key") return !(t == gamma) && restrict(t, h) == restrict(gamma, h);
    if (property == "relmin") return !(restrict(t, h) == restrict(gamma, h));
    if (property == "cokey") return !(t == gamma) && same_cosets(t);
    if (property == "cominimal") return !same_cosets(t);
  } catch (const ParseError&) {
    return false;
  }
  throw std::invalid_argument("unknown property '" + std::string(property) + "'");
}

}  // namespace keysub
