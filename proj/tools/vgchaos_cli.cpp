#include "vgchaos/bounds.hpp"
#include "vgchaos/rosenblatt.hpp"
#include "vgchaos/second_chaos.hpp"
#include "vgchaos/stein.hpp"
#include "vgchaos/vg_distribution.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

// FNV-1a over the canonical "key=value\n" listing of the effective config
std::string config_hash(const std::map<std::string, std::string>& kv) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& [k, v] : kv) {
    for (char c : (k + "=" + v + "\n")) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ull;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void stamp(json& j, const std::map<std::string, std::string>& kv) {
  j["schema_version"] = 1;
  j["library_version"] = VGCHAOS_VERSION;
  j["config_hash"] = config_hash(kv);
}

std::string csv_stamp(const std::map<std::string, std::string>& kv) {
  return "# library_version=" VGCHAOS_VERSION " config_hash=" + config_hash(kv) + "\n";
}

void emit(const std::string& out_dir, const std::string& name, const std::string& content) {
  if (out_dir.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  std::filesystem::create_directories(out_dir);
  std::ofstream f(std::filesystem::path(out_dir) / name, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + name + " in " + out_dir);
  f << content;
}

// flat key=value file; keys are the long option names without the leading --.
// The pairs are appended after the command-line flags, so they override them
// (CLI11 keeps the last value of a single-valued option).
std::vector<std::string> with_config_applied(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read config file " + path);
  std::string line;
  while (std::getline(f, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    };
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (!key.empty()) args.push_back("--" + key + "=" + val);
  }
  return args;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

vgc::SecondChaosElement load_spectrum(const std::string& file, const std::string& inline_list) {
  if (!inline_list.empty()) return vgc::SecondChaosElement(parse_list(inline_list));
  std::ifstream f(file);
  if (!f) throw std::invalid_argument("cannot read spectrum file " + file);
  std::stringstream ss;
  ss << f.rdbuf();
  return vgc::SecondChaosElement::from_json(ss.str());
}

json cumulant_table_json(const vgc::SecondChaosElement& F) {
  json t = json::array();
  for (int p = 2; p <= 6; ++p) t.push_back({{"order", p}, {"kappa", F.cumulant(p)}});
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variance-Gamma approximation on the second Wiener chaos"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --out appear after the subcommand name
  // repeated flags keep the last value, so appended config pairs win
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string out_dir, config_path;
  app.add_option("--out", out_dir, "output directory (default: stdout)");

  // vg-info ---------------------------------------------------------------
  auto* vg = app.add_subcommand("vg-info", "VG cumulants, identity check, optional density table");
  double r = 1.0, theta = 0.0, sigma = 1.0;
  std::string density_grid;
  vg->add_option("--r", r, "shape r > 0")->required();
  vg->add_option("--theta", theta, "skew theta")->required();
  vg->add_option("--sigma", sigma, "scale sigma > 0")->required();
  vg->add_option("--density-grid", density_grid, "lo:hi:n density table");
  vg->add_option("--config", config_path, "key=value file overriding flags");

  // chaos-cumulants -------------------------------------------------------
  auto* cc = app.add_subcommand("chaos-cumulants", "cumulants of a finite second-chaos spectrum");
  std::string spectrum_file, eigenvalues;
  std::uint64_t seed = 0;
  std::size_t n_mc = 0;
  cc->add_option("--spectrum", spectrum_file, "JSON array file of eigenvalues");
  cc->add_option("--eigenvalues", eigenvalues, "inline comma-separated eigenvalues");
  cc->add_option("--n-mc", n_mc, "also report batched sample cumulants from n draws");
  cc->add_option("--seed", seed, "RNG seed (required with --n-mc)");
  cc->add_option("--config", config_path, "key=value file overriding flags");

  // bound-report ----------------------------------------------------------
  auto* br = app.add_subcommand("bound-report", "all bound quantities for (spectrum, VG target)");
  bool rescale = false;
  br->add_option("--spectrum", spectrum_file, "JSON array file of eigenvalues");
  br->add_option("--eigenvalues", eigenvalues, "inline comma-separated eigenvalues");
  br->add_option("--r", r)->required();
  br->add_option("--theta", theta)->required();
  br->add_option("--sigma", sigma)->required();
  br->add_option("--n-mc", n_mc, "total MC budget")->required();
  br->add_option("--seed", seed, "RNG seed")->required();
  br->add_flag("--rescale", rescale, "rescale the spectrum to the target kappa_2 first");
  br->add_option("--config", config_path, "key=value file overriding flags");

  // stein-solve -----------------------------------------------------------
  auto* st = app.add_subcommand("stein-solve", "solve the VG Stein equation on a grid");
  st->set_help_flag("--help", "print help");  // frees the name "h" for the test function
  std::string h_name = "x";
  double x_min = -8.0, x_max = 8.0;
  int n_points = 512;
  bool graded = false;
  st->add_option("--r", r)->required();
  st->add_option("--theta", theta)->required();
  st->add_option("--sigma", sigma)->required();
  st->add_option("--h", h_name, "test function name");
  st->add_option("--x-min", x_min);
  st->add_option("--x-max", x_max);
  st->add_option("--n", n_points, "grid points");
  st->add_flag("--graded", graded, "cluster nodes near 0");
  st->add_option("--config", config_path, "key=value file overriding flags");

  // rosenblatt-rate -------------------------------------------------------
  auto* rr = app.add_subcommand("rosenblatt-rate", "rate experiment along a gamma1 sweep");
  std::string case_name = "a", sweep_text = "-0.52,-0.53,-0.55,-0.58,-0.62";
  double rho = 0.5, gamma2_fixed = -0.7, T = 0.0;
  int n_nodes = 800, n_s_nodes = 400;
  rr->add_option("--case", case_name, "a or b")->check(CLI::IsMember({"a", "b"}));
  rr->add_option("--rho", rho, "case-b exponent ratio in (0,1)");
  rr->add_option("--gamma2", gamma2_fixed, "fixed gamma2 for case a");
  rr->add_option("--sweep", sweep_text, "comma-separated gamma1 values");
  rr->add_option("--n-nodes", n_nodes);
  rr->add_option("--n-s-nodes", n_s_nodes);
  rr->add_option("--T", T, "domain truncation (0 = automatic)");
  rr->add_option("--n-mc", n_mc, "MC budget per sweep point")->required();
  rr->add_option("--seed", seed, "RNG seed")->required();
  rr->add_option("--config", config_path, "key=value file overriding flags");

  try {
    auto args = with_config_applied(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 4;
  }

  try {
    if (vg->parsed()) {
      std::map<std::string, std::string> kv{{"command", "vg-info"},
                                            {"r", std::to_string(r)},
                                            {"theta", std::to_string(theta)},
                                            {"sigma", std::to_string(sigma)},
                                            {"density_grid", density_grid}};
      vgc::VgParams p(r, theta, sigma);
      json j;
      stamp(j, kv);
      j["params"] = {{"r", r}, {"theta", theta}, {"sigma", sigma}, {"mu", p.mu}};
      json t = json::array();
      for (int ord = 2; ord <= 6; ++ord)
        t.push_back({{"order", ord}, {"kappa", vgc::vg_cumulant(p, ord)}});
      j["cumulants"] = t;
      json idres = json::array();
      for (int ell = 1; ell <= 3; ++ell) idres.push_back(vgc::gamma_lin_variance_vg(p, ell));
      j["identity_residual"] = idres;
      emit(out_dir, "vg_info.json", j.dump(2));
      if (!density_grid.empty()) {
        double lo, hi;
        int n;
        if (std::sscanf(density_grid.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || n < 2)
          throw std::invalid_argument("--density-grid expects lo:hi:n");
        std::string csv = csv_stamp(kv) + "x,density\n";
        char buf[80];
        for (int i = 0; i < n; ++i) {
          double x = lo + (hi - lo) * i / (n - 1);
          std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x, vgc::density(p, x));
          csv += buf;
        }
        emit(out_dir, "vg_density.csv", csv);
      }
    } else if (cc->parsed()) {
      std::map<std::string, std::string> kv{{"command", "chaos-cumulants"},
                                            {"spectrum", spectrum_file},
                                            {"eigenvalues", eigenvalues},
                                            {"n_mc", std::to_string(n_mc)},
                                            {"seed", std::to_string(seed)}};
      if (n_mc > 0 && !cc->count("--seed"))
        throw std::invalid_argument("--seed is required with --n-mc");
      auto F = load_spectrum(spectrum_file, eigenvalues);
      json j;
      stamp(j, kv);
      j["spectrum_size"] = F.size();
      j["cumulants"] = cumulant_table_json(F);
      if (n_mc > 0) {
        auto bc = vgc::batched_cumulants(F.sample(n_mc, seed));
        json s = json::array();
        for (int p = 2; p <= 6; ++p)
          s.push_back({{"order", p}, {"mean", bc.mean[p - 2]}, {"se", bc.se[p - 2]}});
        j["sample_cumulants"] = s;
      }
      emit(out_dir, "chaos_cumulants.json", j.dump(2));
    } else if (br->parsed()) {
      std::map<std::string, std::string> kv{{"command", "bound-report"},
                                            {"spectrum", spectrum_file},
                                            {"eigenvalues", eigenvalues},
                                            {"r", std::to_string(r)},
                                            {"theta", std::to_string(theta)},
                                            {"sigma", std::to_string(sigma)},
                                            {"n_mc", std::to_string(n_mc)},
                                            {"seed", std::to_string(seed)},
                                            {"rescale", rescale ? "1" : "0"}};
      vgc::VgParams p(r, theta, sigma);
      auto F = load_spectrum(spectrum_file, eigenvalues);
      if (rescale) F = F.rescaled_to_kappa2(p.variance());
      auto rep = vgc::bound_report(F, p, n_mc, seed);
      json j = json::parse(rep.to_json());
      stamp(j, kv);
      emit(out_dir, "bound_report.json", j.dump(2));
    } else if (st->parsed()) {
      std::map<std::string, std::string> kv{{"command", "stein-solve"},
                                            {"r", std::to_string(r)},
                                            {"theta", std::to_string(theta)},
                                            {"sigma", std::to_string(sigma)},
                                            {"h", h_name},
                                            {"x_min", std::to_string(x_min)},
                                            {"x_max", std::to_string(x_max)},
                                            {"n", std::to_string(n_points)},
                                            {"graded", graded ? "1" : "0"}};
      vgc::VgParams p(r, theta, sigma);
      auto h = vgc::named_test_function(h_name);
      vgc::SteinGrid grid(x_min, x_max, n_points,
                          graded ? vgc::SteinGrid::Spacing::graded
                                 : vgc::SteinGrid::Spacing::uniform);
      auto sol = vgc::solve(p, h, grid);
      emit(out_dir, "stein_solution.csv", csv_stamp(kv) + sol.to_csv());
      std::cerr << "residual_max " << sol.residual_max << "\n";
    } else if (rr->parsed()) {
      std::map<std::string, std::string> kv{{"command", "rosenblatt-rate"},
                                            {"case", case_name},
                                            {"rho", std::to_string(rho)},
                                            {"gamma2", std::to_string(gamma2_fixed)},
                                            {"sweep", sweep_text},
                                            {"n_nodes", std::to_string(n_nodes)},
                                            {"n_s_nodes", std::to_string(n_s_nodes)},
                                            {"T", std::to_string(T)},
                                            {"n_mc", std::to_string(n_mc)},
                                            {"seed", std::to_string(seed)}};
      auto sweep = parse_list(sweep_text);
      using vgc::rosenblatt::LimitCase;
      LimitCase c = (case_name == "a") ? LimitCase::a : LimitCase::b;
      vgc::rosenblatt::RosenblattSpec tmpl(-0.6, -0.6);
      tmpl.T = T;
      tmpl.n_nodes = n_nodes;
      tmpl.n_s_nodes = n_s_nodes;
      auto res = (c == LimitCase::a)
                     ? vgc::rosenblatt::rate_experiment_fixed_gamma2(sweep, gamma2_fixed, tmpl,
                                                                     n_mc, seed)
                     : vgc::rosenblatt::rate_experiment(c, rho, sweep, tmpl, n_mc, seed);
      emit(out_dir, "rosenblatt_rate.csv", csv_stamp(kv) + res.to_csv());
      json j = json::parse(res.summary_json());
      stamp(j, kv);
      emit(out_dir, "rosenblatt_rate_summary.json", j.dump(2));
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 4;
  } catch (const std::domain_error& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
