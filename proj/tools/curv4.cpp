// curv4: command-line front end for the curvature workbench.
//
// Exit status: 0 success, 1 a check failed, 2 malformed input.

#include "curv4/catalog.hpp"
#include "curv4/chart_geometry.hpp"
#include "curv4/eigen3.hpp"
#include "curv4/pinching.hpp"
#include "curv4/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace curv4;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kBadInput = 2;

struct Options {
  std::string precision = "floating";
  std::string duality = "both";
  std::optional<std::string> gamma;
  std::uint64_t trials = 0;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "text";
  std::size_t points = 100;
  double violation_tol = 1e-12;
  std::string target;
  std::string export_model;
  double step = 0.05;
  std::size_t nodes = 9;
};

bool rational(const Options& o) { return o.precision == "rational"; }

std::vector<Duality> dualities(const Options& o) {
  if (o.duality == "plus") return {Duality::self_dual};
  if (o.duality == "minus") return {Duality::anti_self_dual};
  return {Duality::self_dual, Duality::anti_self_dual};
}

std::string exact_or_double(const Rational& q) { return q.str(); }
std::string exact_or_double(double x) { return format_double(x); }

template <class T>
void add_model_summary(Report& rep, ModelId id) {
  const auto p = model_data<T>(id, sample_points<T>(id, 1, 1)[0]);
  const CurvDecomp<T> d = weyl_decompose(p.rm);
  const BlockNorms<T> n = block_norms(d);
  rep.set("scalar", exact_or_double(n.scalar));
  rep.set("|Ric0|^2", exact_or_double(n.traceless_ricci_sq));
  rep.set("|W+|^2", exact_or_double(n.weyl_plus_sq));
  rep.set("|W-|^2", exact_or_double(n.weyl_minus_sq));
  rep.set("det W+", exact_or_double(n.det_weyl_plus));
  rep.set("det W-", exact_or_double(n.det_weyl_minus));
  rep.set("<(Ric0*Ric0)+,W+>",
          exact_or_double(block_inner(kn_square_block(d, Duality::self_dual), d.weyl_plus)));
  rep.set("<(Ric0*Ric0)-,W->",
          exact_or_double(block_inner(kn_square_block(d, Duality::anti_self_dual), d.weyl_minus)));
}

template <class T>
Report verify_model(ModelId id, const Options& o) {
  Report rep("verify", std::string(model_info(id).name));
  rep.set("precision", o.precision);
  add_model_summary<T>(rep, id);
  const auto pts = sample_points<T>(id, o.points, o.seed.value_or(1));
  for (const auto& r : verify_hamilton_identities<T>(id, pts)) rep.add(to_entry(r));
  for (Duality d : {Duality::self_dual, Duality::anti_self_dual})
    rep.add(to_entry(weitzenbock_residual<T>(id, d)));
  if (!model_info(id).compact) {
    std::vector<double> radii;
    for (int r = 10; r <= 100; r += 5) radii.push_back(r);
    const AsymptoticsReport a = potential_asymptotics(id, radii, 10.0, 0.01);
    ReportEntry e;
    e.id = "potential_asymptotics";
    e.lhs = a.c_needed;
    e.rhs = a.c_found.value_or(10.0);
    e.margin = e.rhs - e.lhs;
    e.pass = a.holds;
    e.details.emplace_back("r0", format_double(a.r0));
    e.details.emplace_back("samples", std::to_string(a.samples));
    rep.add(e);
  }
  return rep;
}

template <class T>
T parse_scalar(const std::string& text) {
  if constexpr (ScalarTraits<T>::exact) {
    return parse_rational(text);
  } else {
    return to_double(parse_rational(text));
  }
}

template <class T>
void classify_decomposition(Report& rep, const CurvDecomp<T>& d, const Options& o) {
  for (Duality du : dualities(o)) rep.add(to_entry(check_theorem1(d, du)));
  const T gamma = o.gamma ? parse_scalar<T>(*o.gamma) : T(0);
  const auto [c12, c13] = check_catino(d, gamma);
  rep.add(to_entry(c12));
  if (o.gamma) rep.add(to_entry(c13));
  for (Duality du : dualities(o)) {
    ReportEntry e = to_entry(check_remark14(d, du));
    e.details.emplace_back("duality", std::string(to_string(du)));
    rep.add(e);
  }
}

template <class T>
Report classify_model(ModelId id, const Options& o) {
  Report rep("classify", std::string(model_info(id).name));
  rep.set("precision", o.precision);
  rep.set("duality", o.duality);
  if (o.gamma) rep.set("gamma", *o.gamma);
  const auto p = model_data<T>(id, sample_points<T>(id, 1, o.seed.value_or(1))[0]);
  classify_decomposition(rep, weyl_decompose(p.rm), o);
  return rep;
}

// Worst node per condition over the chart interior.
Report classify_chart(const std::string& path, const Options& o) {
  if (rational(o))
    throw Error(ErrorCode::InvalidArgument, "charts are evaluated in floating precision only");
  const MetricChart chart = load_chart(path);
  const ChartCurvature cc = curvature_from_chart(chart);
  Report rep("classify", path);
  rep.set("precision", "floating");
  rep.set("duality", o.duality);
  rep.set("nodes", std::to_string(cc.nodes.size()));
  if (o.gamma) rep.set("gamma", *o.gamma);
  std::vector<ReportEntry> worst;
  for (const auto& node : cc.nodes) {
    Report one("", "");
    classify_decomposition(one, weyl_decompose(node.rm), o);
    if (worst.empty()) {
      worst = one.entries();
      continue;
    }
    for (std::size_t k = 0; k < worst.size(); ++k)
      if (one.entries()[k].margin < worst[k].margin) worst[k] = one.entries()[k];
  }
  for (auto& e : worst) rep.add(e);
  return rep;
}

Report run_fuzz(const Options& o) {
  if (o.trials == 0) throw Error(ErrorCode::InvalidArgument, "--trials must be at least 1");
  if (!o.seed) throw Error(ErrorCode::InvalidArgument, "fuzz needs --seed for reproducibility");
  FuzzOptions fo;
  fo.violation_tol = o.violation_tol;
  const FuzzSummary s = fuzz_inequalities(o.trials, *o.seed, fo);
  Report rep("fuzz", "");
  rep.set("trials", std::to_string(s.trials));
  rep.set("seed", std::to_string(s.seed));
  rep.set("violation_tol", format_double(fo.violation_tol));
  rep.set("near_equality_hits", std::to_string(s.near_equality_hits));
  rep.set("worst_margin", format_double(s.worst_margin));
  const char* names[] = {"prop21a", "prop21b", "prop22a", "prop22b", "remark_14"};
  for (std::size_t k = 0; k < s.violations_by_check.size(); ++k) {
    ReportEntry e;
    e.id = names[k];
    e.lhs = static_cast<double>(s.violations_by_check[k]);
    e.rhs = 0;
    e.margin = e.rhs - e.lhs + 0.0;
    e.tolerance = fo.violation_tol;
    e.pass = s.violations_by_check[k] == 0;
    e.details.emplace_back("violations", std::to_string(s.violations_by_check[k]));
    rep.add(e);
  }
  return rep;
}

Report run_chart(const Options& o) {
  const MetricChart chart = load_chart(o.target);
  Report rep("chart", o.target);
  const ChartCurvature cc = curvature_from_chart(chart);
  double rmin = 0, rmax = 0;
  for (std::size_t k = 0; k < cc.nodes.size(); ++k) {
    const double r = cc.nodes[k].scalar;
    rmin = k ? std::min(rmin, r) : r;
    rmax = k ? std::max(rmax, r) : r;
  }
  rep.set("nodes", std::to_string(chart.size()));
  rep.set("interior_nodes", std::to_string(cc.nodes.size()));
  rep.set("scalar_min", format_double(rmin));
  rep.set("scalar_max", format_double(rmax));
  const CottonField cot = cotton_tensor(chart);
  rep.set("cotton_max_norm", format_double(cot.max_norm));

  if (!chart.has_potential()) {
    rep.set("potential", "absent: growth fit and gradient estimate skipped");
    return rep;
  }
  const GrowthFit fit = fit_growth(chart);
  ReportEntry g;
  g.id = "growth_fit";
  g.lhs = fit.worst_slack;
  g.rhs = kGrowthTolerance;
  g.margin = kGrowthTolerance - fit.worst_slack;
  g.tolerance = kGrowthTolerance;
  g.pass = fit.feasible;
  g.details = {{"epsilon_hat", format_double(fit.epsilon_hat)},
               {"A_hat", format_double(fit.A_hat)},
               {"c0", format_double(fit.c0)},
               {"c1", format_double(fit.c1)},
               {"c2", format_double(fit.c2)},
               {"support_fraction", format_double(fit.support_fraction)}};
  rep.add(g);

  const Prop41Report p = check_prop41(chart);
  ReportEntry e;
  e.id = "prop41_ratio";
  e.lhs = p.sup_ratio;
  e.rhs = 0;
  e.margin = 0;
  e.pass = std::isfinite(p.sup_ratio);
  e.details = {{"nodes", std::to_string(p.nodes.size())},
               {"excluded", std::to_string(p.excluded)},
               {"note", "empirical lower bound for the constant; no bound is asserted"}};
  rep.add(e);
  return rep;
}

Report run_catalog(const Options& o) {
  Report rep("catalog", "");
  for (const auto& m : models()) {
    rep.set(std::string(m.name), std::string(m.geometry) + "; " + std::string(m.potential) + "; " +
                                     (m.compact ? "compact" : "noncompact") + "; chart " +
                                     std::string(m.coordinates));
  }
  if (!o.export_model.empty()) {
    if (o.out.empty()) throw Error(ErrorCode::InvalidArgument, "--export needs --out <path>");
    const ModelId id = parse_model(o.export_model);
    const MetricChart chart = export_chart(id, chart_box(id, o.step, o.nodes));
    std::ofstream f(o.out);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + o.out + "'");
    write_chart(f, chart);
  }
  return rep;
}

bool is_model(const std::string& s) {
  return std::any_of(models().begin(), models().end(), [&](const ModelInfo& m) { return m.name == s; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curv4: four-dimensional curvature algebra workbench"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--precision", o.precision, "rational or floating")
        ->check(CLI::IsMember({"rational", "floating"}));
    sub->add_option("--out", o.out, "write the report here instead of stdout");
    sub->add_option("--format", o.format, "text or structured")
        ->check(CLI::IsMember({"text", "structured"}));
    sub->add_option("--seed", o.seed, "random seed");
  };

  auto* catalog = app.add_subcommand("catalog", "list the model solitons");
  add_common(catalog);
  catalog->add_option("--export", o.export_model, "write this model's chart to --out");
  catalog->add_option("--step", o.step, "chart spacing for --export");
  catalog->add_option("--nodes", o.nodes, "nodes per axis for --export");

  auto* verify = app.add_subcommand("verify", "check the soliton identities on a model");
  add_common(verify);
  verify->add_option("model", o.target)->required();
  verify->add_option("--points", o.points, "sample points");

  auto* classify = app.add_subcommand("classify", "evaluate the pinching conditions");
  add_common(classify);
  classify->add_option("target", o.target, "model name or chart file")->required();
  classify->add_option("--duality", o.duality)->check(CLI::IsMember({"plus", "minus", "both"}));
  classify->add_option("--gamma", o.gamma, "constant for the |W| <= gamma(...) condition");

  auto* fuzz = app.add_subcommand("fuzz", "random tests of the sharp algebraic inequalities");
  add_common(fuzz);
  fuzz->add_option("--trials", o.trials)->required();
  fuzz->add_option("--violation-tol", o.violation_tol, "margins below minus this count as violations");

  auto* chart = app.add_subcommand("chart", "finite-difference curvature of a metric chart");
  add_common(chart);
  chart->add_option("file", o.target)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    std::optional<Report> rep;
    bool gate = true;  // whether failed entries change the exit status
    if (*catalog) {
      rep = run_catalog(o);
      if (!o.export_model.empty()) o.out.clear();
    } else if (*verify) {
      const ModelId id = parse_model(o.target);
      rep = rational(o) ? verify_model<Rational>(id, o) : verify_model<double>(id, o);
    } else if (*classify) {
      gate = false;
      if (is_model(o.target)) {
        const ModelId id = parse_model(o.target);
        rep = rational(o) ? classify_model<Rational>(id, o) : classify_model<double>(id, o);
      } else if (std::filesystem::exists(o.target)) {
        rep = classify_chart(o.target, o);
      } else {
        throw Error(ErrorCode::UnknownModel, "'" + o.target + "' is neither a model nor a chart file");
      }
    } else if (*fuzz) {
      rep = run_fuzz(o);
    } else if (*chart) {
      rep = run_chart(o);
    }

    const std::string body = o.format == "structured" ? rep->structured() : rep->text();
    if (o.out.empty()) {
      std::cout << body;
    } else {
      std::ofstream f(o.out);
      if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + o.out + "'");
      f << body;
    }
    return gate && !rep->all_pass() ? kCheckFailed : kOk;
  } catch (const Error& e) {
    std::cerr << "curv4: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "curv4: " << e.what() << '\n';
    return kBadInput;
  }
}
