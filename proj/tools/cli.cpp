#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <optional>
#include <stdexcept>

#include "keysub/battery.hpp"
#include "keysub/deciders.hpp"
#include "keysub/report.hpp"

namespace keysub::cli {

namespace {

using ojson = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::string property;
  int n = 3;
  std::string ring = "Z";
  std::optional<std::string> gamma;
  std::string subject = "center";
  std::string primes = "2";
  unsigned exp_cap = 1;
  std::optional<std::string> truncation;
  std::uint64_t seed = 1;
  std::string output = "json";
  int trials = 1000;
  std::optional<std::string> t1;
  std::string map = "m(Z)";
  std::string triple = "triple(Omega; Omega; Omega)";
  std::string decide = "minimal";
  std::vector<int> only;
  int max_witnesses = 3;
  std::optional<std::string> expect;
  bool timing = false;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string json_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  throw ConfigError("expected a string or integer, got " + v.dump());
}

void load_config_file(const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  try {
    for (auto& [key, v] : j.items()) {
      if (key == "command") c.command = v.get<std::string>();
      else if (key == "property") c.property = v.get<std::string>();
      else if (key == "n") c.n = v.get<int>();
      else if (key == "ring") c.ring = v.get<std::string>();
      else if (key == "gamma") c.gamma = v.get<std::string>();
      else if (key == "subject") c.subject = v.get<std::string>();
      else if (key == "primes") {
        if (v.is_array()) {
          std::string joined;
          for (const auto& p : v) joined += (joined.empty() ? "" : ",") + json_text(p);
          c.primes = joined;
        } else {
          c.primes = json_text(v);
        }
      } else if (key == "exp_cap") c.exp_cap = v.get<unsigned>();
      else if (key == "truncation") c.truncation = v.is_null() ? std::nullopt : std::optional(json_text(v));
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "output") c.output = v.get<std::string>();
      else if (key == "trials") c.trials = v.get<int>();
      else if (key == "t1") c.t1 = v.get<std::string>();
      else if (key == "map") c.map = v.get<std::string>();
      else if (key == "triple") c.triple = v.get<std::string>();
      else if (key == "decide") c.decide = v.get<std::string>();
      else if (key == "only") c.only = v.get<std::vector<int>>();
      else if (key == "max_witnesses") c.max_witnesses = v.get<int>();
      else if (key == "expect") c.expect = v.get<std::string>();
      else if (key == "timing") c.timing = v.get<bool>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad config value: " + std::string(e.what()));
  }
}

SearchBox make_box(const RunConfig& c) {
  std::optional<BigInt> truncation;
  if (c.truncation) {
    BigInt l;
    if (l.set_str(*c.truncation, 10) != 0 || l < 2) throw ConfigError("truncation must be an integer >= 2");
    truncation = l;
  }
  return SearchBox::make(PrimeSet::parse(c.primes), c.exp_cap, truncation);
}

DeciderConfig make_decider_config(const RunConfig& c) {
  if (c.max_witnesses < 1) throw ConfigError("max-witnesses must be positive");
  DeciderConfig config;
  config.box = make_box(c);
  config.seed = c.seed;
  config.max_witnesses = static_cast<std::size_t>(c.max_witnesses);
  return config;
}

GradedAdicTopology gamma_of(const RunConfig& c) {
  if (c.n < 2) throw ConfigError("n must be >= 2");
  if (!c.gamma) return GradedAdicTopology::discrete(c.n);
  auto gamma = GradedAdicTopology::parse(*c.gamma);
  if (gamma.degree() != c.n)
    throw ConfigError("gamma has degree " + std::to_string(gamma.degree()) + " but n = " + std::to_string(c.n));
  return gamma;
}

SubgroupSpec subject_of(const RunConfig& c) {
  auto h = SubgroupSpec::parse(c.subject);
  h.check_degree(c.n);
  return h;
}

ojson box_config(const RunConfig& c, const SearchBox& box) {
  ojson j;
  j["primes"] = box.primes.primes();
  j["exp_cap"] = box.exp_cap;
  j["truncation"] = box.truncation.get_str();
  j["seed"] = c.seed;
  return j;
}

CommandReport cmd_verify_identities(const RunConfig& c) {
  if (c.n < 3) throw ConfigError("verify-identities needs n >= 3");
  const auto ring = RingSpec::parse(c.ring);
  CommandReport r;
  r.config["n"] = c.n;
  r.config["ring"] = ring.to_string();
  r.config["trials"] = c.trials;
  r.config["seed"] = c.seed;
  const auto suite = identity_suite(c.n, ring, c.trials, c.seed);
  r.lines = suite.lines;
  r.verdict = suite.passed ? Verdict::Holds : Verdict::Fails;
  return r;
}

CommandReport cmd_check(const RunConfig& c) {
  if (c.property.empty()) throw ConfigError("check needs a property: key, cokey, relmin, cominimal or injkey");
  const auto config = make_decider_config(c);
  const auto gamma = gamma_of(c);
  const auto h = subject_of(c);
  CommandReport r;
  r.config["property"] = c.property;
  r.config["n"] = c.n;
  r.config["gamma"] = gamma.to_literal();
  r.config["subject"] = h.to_string();
  r.config.update(box_config(c, config.box));
  auto report = decide(c.property, h, gamma, config);
  for (const auto& w : report.witnesses)
    if (!verify_witness(c.property, h, gamma, w, config))
      throw std::logic_error("witness " + w + " failed re-verification");
  r.verdict = report.verdict;
  r.witnesses = report.witnesses;
  r.details.push_back(std::move(report));
  return r;
}

CommandReport cmd_check_merson(const RunConfig& c) {
  const auto config = make_decider_config(c);
  const auto h = subject_of(c);
  CommandReport r;
  r.config["n"] = c.n;
  r.config["subject"] = h.to_string();
  VerdictReport report;
  if (c.t1) {
    const auto gamma = gamma_of(c);
    const auto t1 = GradedAdicTopology::parse(*c.t1);
    if (t1.degree() != c.n) throw ConfigError("t1 has the wrong degree");
    r.config["t1"] = t1.to_literal();
    r.config["gamma"] = gamma.to_literal();
    r.config.update(box_config(c, config.box));
    report = merson_check(t1, gamma, h, config.box);
  } else {
    r.config.update(box_config(c, config.box));
    report = merson_exhaustive(c.n, h, config);
  }
  r.verdict = report.verdict;
  r.witnesses = report.witnesses;
  r.details.push_back(std::move(report));
  return r;
}

CommandReport cmd_check_triple(const RunConfig& c) {
  const auto w = BiadditiveMap::parse(c.map);
  const auto triple = ModulusTriple::parse(c.triple);
  CommandReport r;
  r.config["map"] = w.to_string();
  r.config["triple"] = triple.to_literal();
  r.config["decide"] = c.decide;
  if (c.decide == "compatible") {
    r.config["seed"] = c.seed;
    const auto result = triple_compatible(triple, w, c.seed);
    r.verdict = result.compatible ? Verdict::Holds : Verdict::Fails;
    if (!result.compatible) r.witnesses.push_back(result.certificate);
    return r;
  }
  const auto config = make_decider_config(c);
  r.config.update(box_config(c, config.box));
  VerdictReport report;
  if (c.decide == "minimal")
    report = is_minimal_map(w, triple, config);
  else if (c.decide == "strongly-minimal")
    report = is_strongly_minimal_map(w, triple, config);
  else
    throw ConfigError("decide must be minimal, strongly-minimal or compatible");
  r.verdict = report.verdict;
  r.witnesses = report.witnesses;
  r.details.push_back(std::move(report));
  return r;
}

CommandReport cmd_map_table(const RunConfig& c) {
  const auto config = make_decider_config(c);
  const auto gamma = gamma_of(c);
  const auto h = subject_of(c);
  CommandReport r;
  r.config["n"] = c.n;
  r.config["gamma"] = gamma.to_literal();
  r.config["subject"] = h.to_string();
  r.config.update(box_config(c, config.box));
  auto table = restriction_map_table(h, gamma, config);
  for (const auto& [source, image] : table.rows) r.lines.push_back(source.to_literal() + " -> " + image.to_literal());
  r.verdict = table.morphism ? Verdict::Holds : Verdict::Fails;
  r.witnesses = table.violations;
  r.details.push_back(std::move(table.report));
  return r;
}

CommandReport cmd_reproduce(const RunConfig& c) {
  for (int id : c.only)
    if (id < 1 || id > kCriterionCount)
      throw ConfigError("--only ids must lie in 1.." + std::to_string(kCriterionCount));
  CommandReport r;
  r.config["seed"] = c.seed;
  r.config["trials"] = c.trials;
  r.config["only"] = c.only;
  bool all = true;
  for (const auto& result : run_battery(BatteryOptions{c.seed, c.trials}, c.only)) {
    r.lines.push_back(result.line());
    all = all && result.passed;
    if (!result.passed) r.witnesses.push_back("criterion " + std::to_string(result.id));
  }
  r.verdict = all ? Verdict::Holds : Verdict::Fails;
  return r;
}

int exit_code(const CommandReport& r, const RunConfig& c) {
  if (c.expect) return to_string(r.verdict) == *c.expect ? 0 : 1;
  return r.verdict == Verdict::Fails ? 1 : 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graded adic topologies on unitriangular groups: deciders and identity suites", "keysub"};
  app.require_subcommand(0, 1);

  RunConfig flags;
  std::string config_path;
  // Explicit flags override config-file values; each entry copies one field.
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;
  auto track = [&](CLI::Option* o, std::function<void(RunConfig&)> apply) { overrides.emplace_back(o, std::move(apply)); };

  app.add_option("--config", config_path, "JSON file mirroring the run configuration");
  track(app.add_option("--output", flags.output, "json or table"), [&](RunConfig& c) { c.output = flags.output; });
  track(app.add_flag("--timing", flags.timing, "report wall-clock time in ms"), [&](RunConfig& c) { c.timing = flags.timing; });
  track(app.add_option("--seed", flags.seed, "random seed"), [&](RunConfig& c) { c.seed = flags.seed; });

  std::string gamma_flag, truncation_flag, t1_flag, expect_flag;
  auto add_n = [&](CLI::App* s) { track(s->add_option("--n", flags.n, "matrix degree"), [&](RunConfig& c) { c.n = flags.n; }); };
  auto add_box = [&](CLI::App* s) {
    track(s->add_option("--primes", flags.primes, "prime set, e.g. 2,3"), [&](RunConfig& c) { c.primes = flags.primes; });
    track(s->add_option("--exp-cap", flags.exp_cap, "largest finite exponent"), [&](RunConfig& c) { c.exp_cap = flags.exp_cap; });
    track(s->add_option("--truncation", truncation_flag, "oracle modulus L"), [&](RunConfig& c) { c.truncation = truncation_flag; });
    track(s->add_option("--max-witnesses", flags.max_witnesses, "witnesses to report"),
          [&](RunConfig& c) { c.max_witnesses = flags.max_witnesses; });
  };
  auto add_gamma = [&](CLI::App* s) {
    track(s->add_option("--gamma", gamma_flag, "topology literal, default discrete"), [&](RunConfig& c) { c.gamma = gamma_flag; });
  };
  auto add_subject = [&](CLI::App* s) {
    track(s->add_option("--subject", flags.subject, "subgroup literal"), [&](RunConfig& c) { c.subject = flags.subject; });
  };

  auto* identities = app.add_subcommand("verify-identities", "group-law and commutator identity suites");
  add_n(identities);
  track(identities->add_option("--ring", flags.ring, "Z or Z/m"), [&](RunConfig& c) { c.ring = flags.ring; });
  track(identities->add_option("--trials", flags.trials, "random samples per suite"), [&](RunConfig& c) { c.trials = flags.trials; });

  auto* check = app.add_subcommand("check", "decide key, cokey, relmin, cominimal or injkey");
  track(check->add_option("property", flags.property, "property to decide")->required(),
        [&](RunConfig& c) { c.property = flags.property; });
  add_n(check);
  add_gamma(check);
  add_subject(check);
  add_box(check);
  track(check->add_option("--expect", expect_flag, "expected verdict (holds or fails)"), [&](RunConfig& c) { c.expect = expect_flag; });

  auto* merson = app.add_subcommand("check-merson", "agreement on H and G/H forces equality");
  add_n(merson);
  add_gamma(merson);
  add_subject(merson);
  add_box(merson);
  track(merson->add_option("--t1", t1_flag, "check this single coarser topology against gamma"),
        [&](RunConfig& c) { c.t1 = t1_flag; });

  auto* triple = app.add_subcommand("check-triple", "minimality of a biadditive map");
  track(triple->add_option("--map", flags.map, "map literal, e.g. m(Z) or w_n(Z, n=2)"), [&](RunConfig& c) { c.map = flags.map; });
  track(triple->add_option("--triple", flags.triple, "original topology triple"), [&](RunConfig& c) { c.triple = flags.triple; });
  track(triple->add_option("--decide", flags.decide, "minimal, strongly-minimal or compatible"),
        [&](RunConfig& c) { c.decide = flags.decide; });
  add_box(triple);

  auto* table = app.add_subcommand("map-table", "restriction map table with the sup-morphism check");
  add_n(table);
  add_gamma(table);
  add_subject(table);
  add_box(table);

  auto* reproduce = app.add_subcommand("reproduce-paper", "run the twelve-criterion acceptance battery");
  track(reproduce->add_option("--only", flags.only, "criterion ids")->delimiter(','), [&](RunConfig& c) { c.only = flags.only; });
  track(reproduce->add_option("--trials", flags.trials, "random samples for identity criteria"),
        [&](RunConfig& c) { c.trials = flags.trials; });

  for (auto* s : {identities, check, merson, triple, table, reproduce}) s->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  RunConfig c;
  try {
    if (!config_path.empty()) load_config_file(config_path, c);
    if (!app.get_subcommands().empty()) c.command = app.get_subcommands().front()->get_name();
    for (auto& [option, apply] : overrides)
      if (option->count() > 0) apply(c);
    if (c.command.empty()) throw ConfigError("no command given");
    if (c.expect && *c.expect != "holds" && *c.expect != "fails" && *c.expect != "vacuous")
      throw ConfigError("expect must be holds, fails or vacuous");
    if (c.trials < 1) throw ConfigError("trials must be positive");
    const auto format = parse_output_format(c.output);

    const auto start = std::chrono::steady_clock::now();
    CommandReport report;
    if (c.command == "verify-identities") report = cmd_verify_identities(c);
    else if (c.command == "check") report = cmd_check(c);
    else if (c.command == "check-merson") report = cmd_check_merson(c);
    else if (c.command == "check-triple") report = cmd_check_triple(c);
    else if (c.command == "map-table") report = cmd_map_table(c);
    else if (c.command == "reproduce-paper") report = cmd_reproduce(c);
    else throw ConfigError("unknown command '" + c.command + "'");
    report.command = c.command;
    if (c.timing)
      report.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    out << emit_report(report, format);
    return exit_code(report, c);
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace keysub::cli
