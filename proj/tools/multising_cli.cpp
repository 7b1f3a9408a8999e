/* Command-line surface: semigroup queries, box decompositions, free-energy
 * and rate-function curves, entropies, Gibbs probabilities, sampling, and
 * the oracle cross-check suite. Emits CSV with '#' metadata headers or a
 * JSON mirror; identical configurations produce byte-identical files. */

#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "multising/free_energy.hpp"
#include "multising/gibbs.hpp"
#include "multising/io.hpp"
#include "multising/ldp.hpp"
#include "multising/oracle.hpp"

using namespace multising;

namespace {

struct SpecOptions {
  std::string gens;
  std::string spec_file;
  int d = 0;
  int dir = 0;
};

std::vector<long long> parse_ints(const std::string& text, char sep) {
  std::vector<long long> out;
  std::string cur;
  for (char ch : text + sep) {
    if (ch == sep) {
      if (!cur.empty()) {
        try {
          std::size_t used = 0;
          out.push_back(std::stoll(cur, &used));
          if (used != cur.size()) throw ConfigError("bad integer: " + cur);
        } catch (const std::logic_error&) {
          throw ConfigError("bad integer: " + cur);
        }
      }
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

SemigroupSpec resolve_spec(const SpecOptions& opt) {
  SemigroupSpec spec;
  if (!opt.spec_file.empty()) {
    spec = load_spec(opt.spec_file);
  } else if (!opt.gens.empty()) {
    // "2,3,5" is a list of scalar generators; vectors are separated by
    // semicolons as in "2,3;3,5"; a single vector needs --d
    std::vector<Index> gens;
    if (opt.gens.find(';') != std::string::npos) {
      std::string group;
      for (char ch : opt.gens + ';') {
        if (ch == ';') {
          if (!group.empty()) gens.push_back(parse_ints(group, ','));
          group.clear();
        } else {
          group += ch;
        }
      }
    } else {
      std::vector<long long> flat = parse_ints(opt.gens, ',');
      if (opt.d > 1) {
        if (static_cast<int>(flat.size()) != opt.d)
          throw ConfigError(
              "--gens without ';' and --d > 1 must name one vector of "
              "length d");
        gens.push_back(flat);
      } else {
        for (long long g : flat) gens.push_back(Index{g});
      }
    }
    if (gens.empty()) throw ConfigError("no generators given");
    int d = opt.d > 0 ? opt.d : static_cast<int>(gens[0].size());
    spec = validate_generators(gens, d, 1);
  } else {
    throw ConfigError("specify --gens or --spec-file");
  }
  if (opt.dir > 0) {
    if (opt.dir > spec.d) throw ConfigError("direction out of range");
    spec.direction = opt.dir;
  }
  return spec;
}

std::string join_generators(const SemigroupSpec& spec) {
  std::string out;
  for (std::size_t g = 0; g < spec.generators.size(); ++g) {
    if (g) out += ';';
    for (int s = 0; s < spec.d; ++s) {
      if (s) out += ',';
      out += std::to_string(spec.generators[g][s]);
    }
  }
  return out;
}

Box parse_box(const std::string& text, int d) {
  Box box = parse_ints(text, ',');
  if (static_cast<int>(box.size()) != d)
    throw ConfigError("box must list one side per dimension");
  return box;
}

void spec_metadata(AtomicWriter& w, const SemigroupSpec& spec) {
  w.meta("d", std::to_string(spec.d));
  w.meta("generators", join_generators(spec));
  w.meta("direction", std::to_string(spec.direction));
}

// ---------------------------------------------------------------------------

int cmd_semigroup(const SpecOptions& so, long long bound, bool show_gamma,
                  const std::string& out_path, const std::string& format) {
  SemigroupSpec spec = resolve_spec(so);
  std::vector<long long> gens = direction_generators(spec, spec.direction);
  AtomicWriter w(out_path);
  if (show_gamma) {
    Rational g = gamma_value(gens);
    double partial = gamma_partial_sum(gens, static_cast<std::uint64_t>(bound));
    if (format == "json") {
      nlohmann::json j;
      j["gamma"] = g.str();
      j["gamma_float"] = g.to_double();
      j["partial_sum"] = partial;
      j["partial_sum_bound"] = bound;
      w.line(j.dump(2));
    } else {
      w.line("gamma = " + g.str() + " (" + format_double(g.to_double()) + ")");
      w.line("partial_sum(<=" + std::to_string(bound) +
             ") = " + format_double(partial));
    }
    w.commit();
    return 0;
  }
  auto els = enumerate_scalar_semigroup(gens, static_cast<std::uint64_t>(bound));
  if (format == "json") {
    nlohmann::json j;
    j["bound"] = bound;
    j["elements"] = els;
    w.line(j.dump(2));
  } else {
    w.meta("command", "semigroup");
    spec_metadata(w, spec);
    w.meta("bound", std::to_string(bound));
    w.line("index,element");
    for (std::size_t t = 0; t < els.size(); ++t)
      w.line(std::to_string(t + 1) + "," + std::to_string(els[t]));
  }
  w.commit();
  return 0;
}

int cmd_decompose(const SpecOptions& so, const std::string& box_text,
                  bool census_only, const std::string& out_path,
                  const std::string& format) {
  SemigroupSpec spec = resolve_spec(so);
  Box box = parse_box(box_text, spec.d);
  AtomicWriter w(out_path);
  if (census_only) {
    std::map<long long, long long> census =
        chain_length_census(box, spec, spec.direction);
    if (format == "json") {
      nlohmann::json j;
      for (auto& [len, cnt] : census) j[std::to_string(len)] = cnt;
      w.line(j.dump(2));
    } else {
      w.meta("command", "decompose --census");
      spec_metadata(w, spec);
      w.meta("box", box_text);
      w.line("M_index,count");
      for (auto& [len, cnt] : census)
        w.line(std::to_string(len) + "," + std::to_string(cnt));
    }
  } else {
    ChainDecomposition dec = decompose_box(box, spec, spec.direction);
    if (format == "json") {
      nlohmann::json j;
      for (const Chain& c : dec.chains) {
        nlohmann::json entry;
        entry["root"] = c.root;
        entry["members"] = c.members;
        j.push_back(entry);
      }
      w.line(j.dump(2));
    } else {
      w.meta("command", "decompose");
      spec_metadata(w, spec);
      w.meta("box", box_text);
      w.line("root,length");
      for (const Chain& c : dec.chains)
        w.line(format_index(c.root) + "," +
               std::to_string(c.members.size()));
    }
  }
  w.commit();
  return 0;
}

FreeEnergyResult evaluate_free_energy(const SemigroupSpec& spec, double r,
                                      double beta, double tol, long long K) {
  if (spec.d == 1)
    return free_energy_1d(r, beta, direction_generators(spec, 1), tol, K);
  return free_energy_directional(r, beta, spec, spec.direction, tol, K);
}

int cmd_free_energy(const SpecOptions& so, double r, double beta, double tol,
                    bool deriv, bool general, int k_cap,
                    const std::string& out_path, const std::string& format) {
  SemigroupSpec spec = resolve_spec(so);
  FreeEnergyResult res =
      general ? free_energy_general(r, beta, spec, spec.direction, k_cap)
              : evaluate_free_energy(spec, r, beta, tol, 0);
  double dval = 0.0;
  if (deriv)
    dval = free_energy_derivative(r, beta, spec, spec.direction, tol);
  AtomicWriter w(out_path);
  if (format == "json") {
    nlohmann::json j;
    j["r"] = r;
    j["beta"] = beta;
    j["F"] = res.value;
    j["truncation_K"] = res.truncation_K;
    if (res.tail_bound) j["tail_bound"] = *res.tail_bound;
    if (res.constant_C) j["constant_C"] = res.constant_C->str();
    if (res.bonds_per_site_) j["bonds_per_site"] = res.bonds_per_site_->str();
    if (deriv) j["dF"] = dval;
    w.line(j.dump(2));
  } else {
    w.meta("command", general ? "free-energy --general" : "free-energy");
    spec_metadata(w, spec);
    w.meta("r", format_double(r));
    w.meta("tol", format_double(tol));
    w.meta("truncation_K", std::to_string(res.truncation_K));
    if (res.tail_bound) w.meta("tail_bound", format_double(*res.tail_bound));
    if (res.constant_C) w.meta("constant_C", res.constant_C->str());
    if (res.bonds_per_site_)
      w.meta("bonds_per_site", res.bonds_per_site_->str());
    w.line(deriv ? "beta,F,dF" : "beta,F");
    std::string row = format_double(beta) + "," + format_double(res.value);
    if (deriv) row += "," + format_double(dval);
    w.line(row);
  }
  w.commit();
  return 0;
}

int cmd_curve(const SpecOptions& so, const std::string& beta_grid,
              const std::vector<double>& r_values, double tol, long long K,
              const std::string& out_path, const std::string& format) {
  SemigroupSpec spec = resolve_spec(so);
  std::vector<double> betas = parse_grid(beta_grid);
  nlohmann::json jall = nlohmann::json::array();
  AtomicWriter w(out_path);
  for (double r : r_values) {
    double worst_tail = 0.0;
    long long max_K = 0;
    std::vector<std::pair<double, double>> rows;
    for (double beta : betas) {
      FreeEnergyResult res = evaluate_free_energy(spec, r, beta, tol, K);
      rows.emplace_back(beta, res.value);
      if (res.tail_bound) worst_tail = std::max(worst_tail, *res.tail_bound);
      max_K = std::max(max_K, res.truncation_K);
    }
    if (format == "json") {
      nlohmann::json jc;
      jc["r"] = r;
      jc["beta_grid"] = beta_grid;
      jc["truncation_K"] = max_K;
      jc["tail_bound"] = worst_tail;
      nlohmann::json pts = nlohmann::json::array();
      for (auto& [b, f] : rows) pts.push_back({{"beta", b}, {"F", f}});
      jc["points"] = pts;
      jall.push_back(jc);
    } else {
      w.meta("command", "curve");
      spec_metadata(w, spec);
      w.meta("r", format_double(r));
      w.meta("beta_grid", beta_grid);
      w.meta("tol", format_double(tol));
      w.meta("truncation_K", std::to_string(max_K));
      w.meta("tail_bound", format_double(worst_tail));
      w.line("beta,F");
      for (auto& [b, f] : rows)
        w.line(format_double(b) + "," + format_double(f));
    }
  }
  if (format == "json") w.line(jall.dump(2));
  w.commit();
  return 0;
}

int cmd_rate(const SpecOptions& so, const std::string& x_grid, double r,
             double tol, const std::string& out_path,
             const std::string& format) {
  SemigroupSpec spec = resolve_spec(so);
  std::vector<double> xs = parse_grid(x_grid);
  std::vector<RatePoint> pts = rate_curve(r, spec, spec.direction, xs, tol);
  AtomicWriter w(out_path);
  if (format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const RatePoint& p : pts)
      j.push_back({{"x", p.x},
                   {"I", p.rate},
                   {"eta", p.eta},
                   {"capped", p.capped}});
    w.line(j.dump(2));
  } else {
    w.meta("command", "rate");
    spec_metadata(w, spec);
    w.meta("r", format_double(r));
    w.meta("x_grid", x_grid);
    w.meta("tol", format_double(tol));
    w.line("x,I,eta");
    for (const RatePoint& p : pts)
      w.line(format_double(p.x) + "," + format_double(p.rate) + "," +
             format_double(p.eta));
  }
  w.commit();
  return 0;
}

int cmd_ks(const SpecOptions& so, const std::string& beta_grid,
           const std::string& two_multiple, double tol,
           const std::string& out_path, const std::string& format) {
  std::vector<double> betas = parse_grid(beta_grid);
  AtomicWriter w(out_path);
  nlohmann::json j = nlohmann::json::array();
  std::vector<std::pair<double, double>> rows;
  std::string desc;
  if (!two_multiple.empty()) {
    Index p = parse_ints(two_multiple, ',');
    for (double b : betas) rows.emplace_back(b, ks_entropy_2multiple(b, p).value);
    desc = "ks-entropy --p " + two_multiple;
  } else {
    SemigroupSpec spec = resolve_spec(so);
    for (double b : betas)
      rows.emplace_back(
          b, ks_entropy_directional(b, spec, spec.direction, tol).value);
    desc = "ks-entropy";
  }
  if (format == "json") {
    for (auto& [b, v] : rows) j.push_back({{"beta", b}, {"ks", v}});
    w.line(j.dump(2));
  } else {
    w.meta("command", desc);
    w.meta("beta_grid", beta_grid);
    w.line("beta,ks");
    for (auto& [b, v] : rows)
      w.line(format_double(b) + "," + format_double(v));
  }
  w.commit();
  return 0;
}

int cmd_gibbs(const SpecOptions& so, const std::string& event_file,
              double beta, const std::string& box_text,
              const std::string& multiplier, const std::string& out_path,
              const std::string& format) {
  SemigroupSpec spec = resolve_spec(so);
  CylinderEvent ev = load_event(event_file);
  AtomicWriter w(out_path);
  nlohmann::json j;
  j["beta"] = beta;
  std::vector<std::string> lines;
  double limit = limit_cylinder_probability(ev, beta, spec, spec.direction);
  j["limit_probability"] = limit;
  lines.push_back("limit_probability," + format_double(limit));
  if (!box_text.empty()) {
    Box box = parse_box(box_text, spec.d);
    double fin = finite_volume_probability(ev, beta, spec, box, spec.direction);
    j["finite_volume_probability"] = fin;
    lines.push_back("finite_volume_probability," + format_double(fin));
  }
  if (!multiplier.empty()) {
    Index m = parse_ints(multiplier, ',');
    double diff =
        check_multiplication_invariance(ev, m, beta, spec, spec.direction);
    j["multiplication_invariance_gap"] = diff;
    lines.push_back("multiplication_invariance_gap," + format_double(diff));
  }
  if (format == "json") {
    w.line(j.dump(2));
  } else {
    w.meta("command", "gibbs");
    spec_metadata(w, spec);
    w.meta("beta", format_double(beta));
    w.meta("event", event_file);
    w.line("quantity,value");
    for (auto& l : lines) w.line(l);
  }
  w.commit();
  return 0;
}

int cmd_sample(const SpecOptions& so, const std::string& box_text, double beta,
               std::uint64_t seed, int count, const std::string& out_path,
               const std::string& format) {
  SemigroupSpec spec = resolve_spec(so);
  Box box = parse_box(box_text, spec.d);
  SampleResult res = sample_box(box, beta, spec, spec.direction, seed, count);
  AtomicWriter w(out_path);
  if (format == "json") {
    nlohmann::json j;
    j["sites"] = res.sites;
    j["configs"] = res.configs;
    w.line(j.dump(2));
  } else {
    w.meta("command", "sample");
    spec_metadata(w, spec);
    w.meta("box", box_text);
    w.meta("beta", format_double(beta));
    w.meta("seed", std::to_string(seed));
    w.meta("count", std::to_string(count));
    std::string header;
    for (std::size_t t = 0; t < res.sites.size(); ++t) {
      if (t) header += ',';
      header += format_index(res.sites[t]);
    }
    w.line(header);
    for (const auto& cfg : res.configs) {
      std::string row;
      for (std::size_t t = 0; t < cfg.size(); ++t) {
        if (t) row += ',';
        row += (cfg[t] > 0 ? "1" : "-1");
      }
      w.line(row);
    }
  }
  w.commit();
  return 0;
}

// ---------------------------------------------------------------------------
// verify: oracle cross-check table

struct CheckRow {
  std::string name;
  bool pass;
  double worst;
};

int cmd_verify(int max_sites) {
  std::vector<CheckRow> table;
  auto add = [&](const std::string& name, double worst, double bound) {
    table.push_back({name, worst <= bound, worst});
  };

  SemigroupSpec g2 = scalar_spec({2});
  SemigroupSpec g23 = scalar_spec({2, 3});
  SemigroupSpec s23 = validate_generators({{2, 3}}, 2);

  {
    double worst = 0.0;
    for (double r : {0.2, 0.5, 0.8})
      for (double beta : {-1.0, 0.5, 1.5}) {
        for (long long n : {1LL, 4LL, 9LL}) {
          Box box{n};
          if (static_cast<long long>(
                  oracle::involved_sites(box, g2, 1).sites.size()) > max_sites)
            continue;
          worst = std::max(worst,
                           std::fabs(finite_mgf(r, beta, g2, box, 1) -
                                     oracle::brute_force_mgf(r, beta, g2, box, 1)));
        }
        for (Box box : {Box{2, 3}, Box{3, 3}}) {
          if (static_cast<long long>(
                  oracle::involved_sites(box, s23, 1).sites.size()) > max_sites)
            continue;
          worst = std::max(worst,
                           std::fabs(finite_mgf(r, beta, s23, box, 1) -
                                     oracle::brute_force_mgf(r, beta, s23, box, 1)));
        }
      }
    add("log-MGF census vs enumeration", worst, 1e-12);
  }
  {
    double worst = 0.0;
    CylinderEvent ev{{{1}, {2}}, {1, -1}};
    for (double beta : {-0.8, 0.9})
      for (Box box : {Box{2}, Box{6}})
        worst = std::max(
            worst, std::fabs(finite_volume_probability(ev, beta, g2, box, 1) -
                             oracle::brute_force_cylinder(ev, beta, g2, box, 1)));
    add("cylinder chain-factorized vs joint enumeration", worst, 1e-12);
  }
  {
    double worst = 0.0;
    CylinderEvent ev{{{1}, {3}, {4}}, {1, 1, -1}};
    for (double beta : {0.5, 1.2})
      worst = std::max(
          worst,
          std::fabs(limit_cylinder_probability(ev, beta, g23, 1) -
                    finite_volume_probability(ev, beta, g23, {27}, 1)));
    add("limit measure vs large finite volume", worst, 1e-6);
  }
  {
    double worst = 0.0;
    for (double beta : {-0.9, 0.4, 1.1})
      for (int k : {2, 6, 10})
        worst = std::max(worst, std::fabs(oracle::brute_force_block_entropy(
                                    beta, k) -
                                ising_block_entropy(beta, k)));
    add("block entropy closed form vs pinned ratios", worst, 1e-12);
  }
  {
    double worst = 0.0;
    for (long long m : {2LL, 3LL, 5LL, 7LL})
      worst = std::max(
          worst, check_multiplication_invariance(
                     CylinderEvent{{{1}, {2}, {4}}, {1, -1, 1}}, {m}, 0.8, g2));
    for (Index m : {Index{2, 3}, Index{3, 5}})
      worst = std::max(worst, check_multiplication_invariance(
                                  CylinderEvent{{{1, 1}, {2, 3}}, {1, 1}}, m,
                                  1.1, s23, 1));
    add("multiplication invariance catalog", worst, 1e-12);
  }
  {
    double worst = 0.0;
    const double step = 1e-5;
    for (double beta : {-1.4, 0.3, 1.8}) {
      double analytic = free_energy_derivative(0.4, beta, {2, 3}, 1e-12);
      double fd = (free_energy_1d(0.4, beta + step, {2, 3}, 1e-13).value -
                   free_energy_1d(0.4, beta - step, {2, 3}, 1e-13).value) /
                  (2 * step);
      worst = std::max(worst, std::fabs(analytic - fd));
    }
    add("derivative vs central differences", worst, 1e-6);
  }
  {
    bool ok = gamma_value({2, 3, 5, 7, 11}) == Rational(77, 16);
    SemigroupSpec fig2 = validate_generators(
        {{2, 3}, {3, 5}, {5, 7}, {7, 11}, {11, 2}}, 2);
    ok = ok && directional_constant(fig2, 1) == Rational(2261, 660);
    table.push_back({"exact constants", ok, ok ? 0.0 : 1.0});
  }

  bool all = true;
  for (const CheckRow& row : table) {
    std::printf("%-48s %s  (worst %.3e)\n", row.name.c_str(),
                row.pass ? "PASS" : "FAIL", row.worst);
    all = all && row.pass;
  }
  std::printf("%s\n", all ? "all cross-checks passed" : "CROSS-CHECKS FAILED");
  return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thermodynamics of multiplicative spin chains"};
  app.require_subcommand(1);

  SpecOptions so;
  std::string out_path = "-";
  std::string format = "csv";
  double r = 0.5, beta = 1.0, tol = 1e-10;
  std::uint64_t seed = 1;

  auto add_spec_flags = [&](CLI::App* cmd) {
    cmd->add_option("--gens", so.gens,
                    "generators: scalars 2,3,5 or vectors 2,3;3,5");
    cmd->add_option("--spec-file", so.spec_file, "JSON spec file");
    cmd->add_option("--d", so.d, "dimension (defaults to vector length)");
    cmd->add_option("--dir", so.dir, "ordering direction, 1-based");
  };
  auto add_io_flags = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "output file ('-' for stdout)");
    cmd->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  auto* c_semi = app.add_subcommand("semigroup", "enumerate or summarize");
  long long bound = 100;
  bool show_gamma = false;
  add_spec_flags(c_semi);
  add_io_flags(c_semi);
  c_semi->add_option("--bound", bound, "enumeration bound");
  c_semi->add_flag("--gamma", show_gamma, "print the reciprocal sum");

  auto* c_dec = app.add_subcommand("decompose", "chains of a finite box");
  std::string box_text;
  bool census_only = false;
  add_spec_flags(c_dec);
  add_io_flags(c_dec);
  c_dec->add_option("--box", box_text, "box sides N1,N2,...")->required();
  c_dec->add_flag("--census", census_only, "emit length census only");

  auto* c_fe = app.add_subcommand("free-energy", "single evaluation");
  bool deriv = false, general = false;
  int k_cap = 24;
  add_spec_flags(c_fe);
  add_io_flags(c_fe);
  c_fe->add_option("--r", r, "Bernoulli bias");
  c_fe->add_option("--beta", beta, "inverse temperature");
  c_fe->add_option("--tol", tol, "series tolerance");
  c_fe->add_flag("--deriv", deriv, "also emit dF/dbeta");
  c_fe->add_flag("--general", general, "rank-count form");
  c_fe->add_option("--K-cap", k_cap, "cap per coordinate (general form)");

  auto* c_curve = app.add_subcommand("curve", "free energy over a beta grid");
  std::string beta_grid = "-3:3:121";
  std::string r_grid_text;
  bool fig1 = false, fig2 = false;
  long long fixed_K = 0;
  add_spec_flags(c_curve);
  add_io_flags(c_curve);
  c_curve->add_option("--beta-grid", beta_grid, "start:stop:count");
  c_curve->add_option("--r", r, "Bernoulli bias");
  c_curve->add_option("--r-grid", r_grid_text, "start:stop:count for r");
  c_curve->add_option("--tol", tol, "series tolerance");
  c_curve->add_option("--K", fixed_K, "fixed truncation depth");
  c_curve->add_flag("--fig1", fig1, "scalar five-generator preset");
  c_curve->add_flag("--fig2", fig2, "planar five-generator preset");

  auto* c_rate = app.add_subcommand("rate", "rate function over an x grid");
  std::string x_grid = "-0.9:0.9:37";
  add_spec_flags(c_rate);
  add_io_flags(c_rate);
  c_rate->add_option("--x-grid", x_grid, "start:stop:count");
  c_rate->add_option("--r", r, "Bernoulli bias");
  c_rate->add_option("--tol", tol, "solver tolerance");

  auto* c_ks = app.add_subcommand("ks-entropy", "entropy of the limit measure");
  std::string beta_grid_ks = "0:2:21";
  std::string two_multiple;
  add_spec_flags(c_ks);
  add_io_flags(c_ks);
  c_ks->add_option("--beta-grid", beta_grid_ks, "start:stop:count");
  c_ks->add_option("--p", two_multiple,
                   "single generator vector for the closed geometric form");
  c_ks->add_option("--tol", tol, "series tolerance");

  auto* c_gibbs = app.add_subcommand("gibbs", "cylinder probabilities");
  std::string event_file, multiplier;
  std::string gibbs_box;
  add_spec_flags(c_gibbs);
  add_io_flags(c_gibbs);
  c_gibbs->add_option("--event-file", event_file, "JSON event")->required();
  c_gibbs->add_option("--beta", beta, "inverse temperature");
  c_gibbs->add_option("--box", gibbs_box, "also evaluate in this finite box");
  c_gibbs->add_option("--m", multiplier, "also check multiplication by m");

  auto* c_sample = app.add_subcommand("sample", "draw configurations");
  int count = 10;
  add_spec_flags(c_sample);
  add_io_flags(c_sample);
  c_sample->add_option("--box", box_text, "box sides")->required();
  c_sample->add_option("--beta", beta, "inverse temperature");
  c_sample->add_option("--seed", seed, "RNG seed");
  c_sample->add_option("--count", count, "number of configurations");

  auto* c_verify = app.add_subcommand("verify", "oracle cross-check table");
  int max_sites = 20;
  c_verify->add_option("--max-sites", max_sites,
                       "enumeration budget per check");

  try {
    app.parse(argc, argv);
    if (c_semi->parsed())
      return cmd_semigroup(so, bound, show_gamma, out_path, format);
    if (c_dec->parsed())
      return cmd_decompose(so, box_text, census_only, out_path, format);
    if (c_fe->parsed())
      return cmd_free_energy(so, r, beta, tol, deriv, general, k_cap, out_path,
                             format);
    if (c_curve->parsed()) {
      if (fig1 && fig2) throw ConfigError("choose one preset");
      if (fig1) {
        so = SpecOptions{"2,3,5,7,11", "", 1, 1};
        if (fixed_K == 0) fixed_K = 100;
      } else if (fig2) {
        so = SpecOptions{"2,3;3,5;5,7;7,11;11,2", "", 2, 1};
        if (fixed_K == 0) fixed_K = 100;
      }
      std::vector<double> rs;
      if (!r_grid_text.empty())
        rs = parse_grid(r_grid_text);
      else
        rs.push_back(r);
      return cmd_curve(so, beta_grid, rs, tol, fixed_K, out_path, format);
    }
    if (c_rate->parsed())
      return cmd_rate(so, x_grid, r, tol, out_path, format);
    if (c_ks->parsed())
      return cmd_ks(so, beta_grid_ks, two_multiple, tol, out_path, format);
    if (c_gibbs->parsed())
      return cmd_gibbs(so, event_file, beta, gibbs_box, multiplier, out_path,
                       format);
    if (c_sample->parsed())
      return cmd_sample(so, box_text, beta, seed, count, out_path, format);
    if (c_verify->parsed()) return cmd_verify(max_sites);
    return 2;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "computation error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
