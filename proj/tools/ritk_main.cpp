#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ritk/kfunctional.hpp"
#include "ritk/report.hpp"

using namespace ritk;
using nlohmann::json;

namespace {

json load_json_arg(const std::string& arg) {
  std::ifstream in(arg);
  if (in) return json::parse(in);
  return json::parse(arg);  // inline JSON fallback
}

StepProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile file: " + path);
  return read_profile(in);
}

double parse_q(const std::string& s) {
  if (s == "inf" || s == "infinity") return kInf;
  return std::stod(s);
}

void emit(const std::vector<ReportRecord>& rows, const std::string& name,
          const std::string& out_dir, const std::string& format) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path base = std::filesystem::path(out_dir) / name;
  if (format == "json") {
    std::ofstream out(base.string() + ".json");
    out << to_json(rows).dump(2) << "\n";
    std::cout << to_json(rows).dump(2) << "\n";
  } else {
    std::ofstream out(base.string() + ".csv");
    out << to_csv(rows);
    std::cout << to_csv(rows);
  }
}

bool all_pass(const std::vector<ReportRecord>& rows) {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rearrangement-invariant toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  uint64_t seed = 1;
  std::string out_dir = ".";
  std::string format = "csv";
  app.add_option("--seed", seed, "random seed for all sweeps");
  app.add_option("--out-dir", out_dir, "directory for emitted reports");
  app.add_option("--format", format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  // conjugate
  auto* conj = app.add_subcommand("conjugate", "Sobolev/reduced conjugate fits");
  std::string conj_young;
  double conj_n = 3, conj_k = 1;
  conj->add_option("--young", conj_young, "Young descriptor (file or inline JSON)")
      ->required();
  conj->add_option("--n", conj_n)->required();
  conj->add_option("--k", conj_k)->required();

  // norm
  auto* nrm = app.add_subcommand("norm", "evaluate one r.i. norm");
  std::string nrm_profile, nrm_spec;
  nrm->add_option("--profile", nrm_profile, "step-profile file")->required();
  nrm->add_option("--spec", nrm_spec, "NormSpec (file or inline JSON)")->required();

  // hardy-check
  auto* hc = app.add_subcommand("hardy-check", "Hardy reduction boundedness");
  std::string hc_domain, hc_target, hc_expect;
  double hc_n = 3, hc_k = 1, hc_L = 0.0;
  hc->add_option("--domain", hc_domain, "domain NormSpec JSON")->required();
  hc->add_option("--target", hc_target, "target NormSpec JSON")->required();
  hc->add_option("--n", hc_n)->required();
  hc->add_option("--k", hc_k)->required();
  hc->add_option("--L", hc_L, "override both domain lengths");
  hc->add_option("--expect", hc_expect, "bounded|diverging");

  // kfunct
  auto* kf = app.add_subcommand("kfunct", "K-functional profile (Holmstedt)");
  std::string kf_profile, kf_q = "1", kf_tgrid = "0.01:10:20";
  double kf_p = 2.0;
  kf->add_option("--profile", kf_profile)->required();
  kf->add_option("--p", kf_p)->required();
  kf->add_option("--q", kf_q, "secondary index or 'inf'");
  kf->add_option("--t-grid", kf_tgrid, "lo:hi:count");

  // kfunct-constrained
  auto* kc = app.add_subcommand("kfunct-constrained",
                                "divergence-constrained K splitting");
  std::string kc_field, kc_q = "1";
  double kc_t = 1.0, kc_p = 2.0;
  int kc_k = 1;
  kc->add_option("--field", kc_field, "grid field file")->required();
  kc->add_option("--t", kc_t)->required();
  kc->add_option("--p", kc_p)->required();
  kc->add_option("--q", kc_q);
  kc->add_option("--k", kc_k)->required();

  // field-study / report
  auto* fs = app.add_subcommand("field-study", "grid pipeline sweep");
  std::string fs_config;
  fs->add_option("--config", fs_config, "config JSON (file or inline)");
  auto* rp = app.add_subcommand("report", "full study from a config document");
  std::string rp_config;
  rp->add_option("--config", rp_config, "config JSON (file or inline)");

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<ReportRecord> rows;
    std::string name;

    if (conj->parsed()) {
      name = "conjugate";
      json cfg = json::array(
          {{{"young", load_json_arg(conj_young)}, {"n", conj_n}, {"k", conj_k}}});
      rows = run_conjugate_table(cfg, seed);
    } else if (nrm->parsed()) {
      name = "norm";
      const StepProfile f = load_profile(nrm_profile);
      const NormSpec spec = norm_spec_from_json(load_json_arg(nrm_spec));
      ReportRecord rec;
      rec.id = "norm/0";
      rec.config_hash = config_hash(load_json_arg(nrm_spec));
      rec.inputs = nrm_profile + " " + spec.describe();
      rec.metrics.emplace_back("norm", ri_norm(f, spec));
      rec.verdict = "pass";
      rows.push_back(std::move(rec));
    } else if (hc->parsed()) {
      name = "hardy-check";
      json domain = load_json_arg(hc_domain), target = load_json_arg(hc_target);
      if (hc_L > 0.0) {
        domain["L"] = hc_L;
        target["L"] = hc_L;
      }
      json entry = {{"domain", domain}, {"target", target}, {"n", hc_n}, {"k", hc_k}};
      if (!hc_expect.empty()) entry["expect"] = hc_expect;
      rows = run_reduction_study(json::array({entry}), seed);
    } else if (kf->parsed()) {
      name = "kfunct";
      const StepProfile f = load_profile(kf_profile);
      double lo, hi;
      int count;
      char c1, c2;
      std::istringstream ts(kf_tgrid);
      if (!(ts >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':')
        throw std::runtime_error("bad --t-grid, expected lo:hi:count");
      std::vector<double> tg;
      for (int i = 0; i < count; ++i)
        tg.push_back(lo * std::pow(hi / lo, count == 1 ? 0.0 : double(i) / (count - 1)));
      const KProfile kp = k_profile(f, kf_p, parse_q(kf_q), tg);
      kp.validate();
      json out = {{"couple", kp.couple}, {"t", kp.t}, {"K", kp.K}};
      std::filesystem::create_directories(out_dir);
      std::ofstream os(std::filesystem::path(out_dir) / "kfunct.json");
      os << out.dump(2) << "\n";
      std::cout << out.dump(2) << "\n";
      return 0;
    } else if (kc->parsed()) {
      name = "kfunct-constrained";
      const GridField F = read_field(kc_field);
      const ConstrainedSplit sp =
          constrained_k_split(F, kc_t, kc_p, parse_q(kc_q), kc_k);
      ReportRecord rec;
      rec.id = "kfunct-constrained/0";
      rec.config_hash = "-";
      rec.inputs = kc_field + " t=" + std::to_string(kc_t);
      rec.metrics.emplace_back("cost", sp.cost);
      rec.metrics.emplace_back("holmstedt", sp.holmstedt);
      rec.metrics.emplace_back("ratio", sp.ratio);
      rec.pass = sp.ratio <= 50.0;
      rec.verdict = rec.pass ? "pass" : "fail";
      rows.push_back(std::move(rec));
    } else if (fs->parsed()) {
      name = "field-study";
      json cfg = fs_config.empty() ? default_report_config() : load_json_arg(fs_config);
      rows = run_field_study(cfg.contains("fields") ? cfg.at("fields") : cfg, seed);
    } else if (rp->parsed()) {
      name = "report";
      json cfg = rp_config.empty() ? default_report_config() : load_json_arg(rp_config);
      rows = run_report(cfg, seed);
    }

    emit(rows, name, out_dir, format);
    return all_pass(rows) ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
