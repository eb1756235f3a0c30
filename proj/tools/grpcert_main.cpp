#include <chrono>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "grpcert/characters.hpp"
#include "grpcert/constructions.hpp"
#include "grpcert/groupspec.hpp"
#include "grpcert/report.hpp"
#include "grpcert/zg.hpp"

namespace {

using namespace grpcert;

void print_text_summary(const VerificationReport& report,
                        const RunConfig& config) {
  int pass = 0, fail = 0, obs = 0;
  for (const Check& c : report.checks()) {
    switch (c.status) {
      case CheckStatus::kPass: ++pass; break;
      case CheckStatus::kFail: ++fail; break;
      case CheckStatus::kObservation: ++obs; break;
    }
  }
  nlohmann::json doc = report.to_json(config);
  std::cout << "claim:  " << report.claim() << "\n"
            << "group:  " << report.group_label() << "\n"
            << "checks: " << pass << " pass / " << fail << " fail / " << obs
            << " observation\n"
            << "digest: " << doc["stable_digest"].get<std::string>() << "\n";
  int shown = 0;
  for (const Check& c : report.checks()) {
    if (c.status != CheckStatus::kFail) continue;
    if (++shown > 20) {
      std::cout << "  ... (" << fail - 20 << " more failures)\n";
      break;
    }
    std::cout << "  FAIL " << c.name << "  witness: " << c.witness.dump()
              << "\n";
  }
  std::cout << "result: " << (fail == 0 ? "PASS" : "FAIL") << "\n";
}

int finish(VerificationReport& report, const RunConfig& config,
           double elapsed_ms) {
  report.set_timing_ms(elapsed_ms);
  std::string body = emit_report(report, config);
  if (config.format == "json")
    std::cout << body;
  else
    print_text_summary(report, config);
  return report.all_passed() ? 0 : 1;
}

double ms_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

int cmd_catalog_list() {
  std::cout << "group spec grammar:\n"
               "  cayley:<path>          JSON {\"order\": n, \"table\":"
               " [row-major indices]}\n"
               "  perm:<path>            JSON {\"degree\": d, \"generators\":"
               " [[images], ...]}\n"
               "  abelian:<d1,...,dk>    direct sum of cyclic groups\n"
               "  extraspecial:<p>:<w>:<e>  odd p, odd width w >= 3, e = p\n"
               "  modular:<p>:<n>        order p^n, n >= 3\n"
               "  product:<a>*<b>        direct product\n"
               "  centralproduct:<a>*<b> glued along maximal central cyclic\n"
               "\nstandard catalog sweep:\n";
  for (const GroupPtr& g : standard_catalog(243))
    std::cout << "  " << g->label() << "  (order " << g->order() << ")\n";
  return 0;
}

int cmd_subgroups(const std::string& spec_text, bool classify,
                  RunConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  GroupSpec spec = GroupSpec::parse(spec_text);
  GroupPtr g = spec.build();
  auto lattice = all_subgroups(g, config.subgroup_order_cap);

  VerificationReport report("subgroup-lattice", g->label());
  report.set_parameter("group_spec", spec.print());
  report.set_parameter("order", g->order());
  report.set_parameter("subgroups",
                       static_cast<int>(lattice->subgroups.size()));
  report.set_parameter("conjugacy_classes", lattice->num_classes);
  for (int cid = 0; cid < lattice->num_classes; ++cid) {
    const SubgroupRecord& rec =
        lattice->subgroups[lattice->class_representative[cid]];
    int size = 0;
    for (const SubgroupRecord& r : lattice->subgroups)
      if (r.conjugacy_class_id == cid) ++size;
    char name[32];
    std::snprintf(name, sizeof name, "class%04d", cid);
    report.add_observation(
        name, {{"order", rec.order},
               {"subgroups_in_class", size},
               {"normal", rec.is_normal},
               {"abelian", rec.is_abelian},
               {"elementary_abelian", rec.is_elementary_abelian},
               {"rank", rec.rank}});
  }
  if (classify) {
    SubgroupRecord q = find_normal_q(g);
    ElementSet z = g->center_set();
    for (size_t i = 0; i < lattice->subgroups.size(); ++i) {
      const SubgroupRecord& h = lattice->subgroups[i];
      if (h.member_set.intersect(z).count() != 1) continue;
      char name[32];
      std::snprintf(name, sizeof name, "classify/h%04zu", i);
      try {
        Classification c = classify_subgroup(g, q, h);
        report.add_pass(name, {{"tag", to_string(c.tag)},
                               {"order", h.order},
                               {"class_id", h.conjugacy_class_id}});
      } catch (const UnclassifiableError& e) {
        report.add_fail(name, {{"error", e.what()}, {"order", h.order}});
      }
    }
  }
  return finish(report, config, ms_since(t0));
}

int cmd_table(const std::string& spec_text, RunConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  GroupSpec spec = GroupSpec::parse(spec_text);
  GroupPtr g = spec.build();
  auto table = character_table(g, config.subgroup_order_cap);

  VerificationReport report("character-table", g->label());
  report.set_parameter("group_spec", spec.print());
  report.set_parameter("order", g->order());
  report.set_parameter("classes", g->classes().num_classes());
  report.add_pass("orthogonality",
                  {{"note", "both orthogonality relations verified exactly"}});
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < table->size(); ++i) {
    nlohmann::json values = nlohmann::json::array();
    for (const Cyclotomic& v : table->irreducibles()[i].values())
      values.push_back(v.str());
    rows.push_back({{"degree", table->degrees()[i]}, {"values", values}});
  }
  report.set_parameter("irreducibles", rows);

  if (config.format != "json") {
    const ClassPartition& cls = g->classes();
    std::cout << "classes (representative, size):";
    for (int c = 0; c < cls.num_classes(); ++c)
      std::cout << " (" << cls.representatives[c] << ","
                << cls.class_sizes[c] << ")";
    std::cout << "\n";
    for (int i = 0; i < table->size(); ++i) {
      std::cout << "chi" << i << " [deg " << table->degrees()[i] << "]:";
      for (const Cyclotomic& v : table->irreducibles()[i].values())
        std::cout << "  " << v.str();
      std::cout << "\n";
    }
  }
  return finish(report, config, ms_since(t0));
}

int cmd_verify_rank3(const std::string& spec_text, bool all_q,
                     bool corrupt_beta, RunConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  GroupSpec spec = GroupSpec::parse(spec_text);
  GroupPtr g = spec.build();
  Rank3Options opts;
  opts.sweep_all_q = all_q || config.sweep_all_q;
  opts.threads = config.resolved_threads();
  opts.order_cap = config.subgroup_order_cap;
  opts.corrupt_beta = corrupt_beta;
  VerificationReport report = verify_rank3(g, opts);
  report.set_parameter("group_spec", spec.print());
  return finish(report, config, ms_since(t0));
}

int cmd_verify_abelian(const std::string& spec_text, int rank_override,
                       RunConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  GroupSpec spec = GroupSpec::parse(spec_text);
  GroupPtr g = spec.build();
  SphereActionModel x = center_sphere_family(g, config.subgroup_order_cap);
  if (rank_override > 0 && rank_override != x.rk_x)
    throw BadSpecError("--rank " + std::to_string(rank_override) +
                       " does not match the model isotropy rank " +
                       std::to_string(x.rk_x));
  AbelianOptions opts;
  opts.threads = config.resolved_threads();
  opts.order_cap = config.subgroup_order_cap;
  opts.sweep_injections = config.sweep_injections;
  VerificationReport report = verify_abelian(g, x, opts);
  report.set_parameter("group_spec", spec.print());
  {
    nlohmann::json dims = nlohmann::json::array();
    for (Int d : x.sphere_dims) dims.push_back(d);
    report.set_parameter("sphere_dims", dims);
  }

  int rank = elementary_abelian_rank(*g);
  int zrank = make_record(*g, g->center_set()).rank;
  if (x.rk_x == rank - zrank)
    report.add_pass("model/isotropy-rank-drop",
                    {{"rk_x", x.rk_x}, {"rank", rank}, {"center_rank", zrank}});
  else
    report.add_fail("model/isotropy-rank-drop",
                    {{"rk_x", x.rk_x}, {"rank", rank}, {"center_rank", zrank}});
  if (x.all_isotropy_abelian)
    report.add_pass("model/all-isotropy-abelian");
  else
    report.add_fail("model/all-isotropy-abelian",
                    {{"note", "a nonabelian isotropy class exists"}});
  return finish(report, config, ms_since(t0));
}

int cmd_verify_amalgam(int p, RunConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  Int bound =
      config.degree_bound > 0 ? config.degree_bound : 2 * Int(p) * Int(p);
  VerificationReport report =
      amalgam_obstruction(p, bound, config.resolved_threads());
  return finish(report, config, ms_since(t0));
}

int cmd_complex_demo(const std::string& spec_text, int n, int r,
                     RunConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  GroupSpec spec = GroupSpec::parse(spec_text);
  GroupPtr g = spec.build();
  SphericalClassCertificate cert = find_spherical_classes(
      g, n, r, config.cocycle_bound, config.resolved_threads());

  VerificationReport report("spherical-classes", g->label());
  report.set_parameter("group_spec", spec.print());
  report.set_parameter("n", n);
  report.set_parameter("rank", r);
  report.set_parameter("cocycle_bound", config.cocycle_bound);
  if (!cert.found) {
    // An exhausted search is an outcome, not a refutation: the bound may
    // simply be too small.
    report.add_observation("search-exhausted",
                           {{"note", "no passing tuple within the bound"}});
    return finish(report, config, ms_since(t0));
  }
  nlohmann::json classes = nlohmann::json::array();
  for (const IRow& row : cert.classes) {
    nlohmann::json v = nlohmann::json::array();
    for (int i = 0; i < row.cols(); ++i) v.push_back(row(0, i));
    classes.push_back(v);
  }
  report.set_parameter("classes", classes);
  for (size_t k = 0; k < cert.total_homology.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "homology/deg%zu", k);
    nlohmann::json d = {{"free_rank", cert.total_homology[k].free_rank},
                        {"torsion", cert.total_homology[k].torsion}};
    if (cert.total_homology[k].torsion.empty())
      report.add_pass(name, d);
    else
      report.add_fail(name, d);
  }
  for (size_t mi = 0; mi < cert.certificate.reports.size(); ++mi)
    for (size_t si = 0; si < cert.certificate.reports[mi].size(); ++si) {
      const TateReport& tr = cert.certificate.reports[mi][si];
      char name[48];
      std::snprintf(name, sizeof name, "projective/module%zu/subgroup%02zu",
                    mi, si);
      if (tr.projective)
        report.add_pass(name);
      else
        report.add_fail(name, {{"h_minus1", tr.h_minus1},
                               {"h_zero", tr.h_zero},
                               {"subgroup", tr.subgroup_members}});
    }
  return finish(report, config, ms_since(t0));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "grpcert: exact verification of representation-theoretic and homological"
      " constructions for p-group actions on products of spheres"};
  app.require_subcommand(1);

  RunConfig config;
  std::string group_spec;
  bool classify = false, all_q = false, corrupt_beta = false;
  int p = 3, n = 2, rank = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--threads", config.threads,
                    "worker threads (overrides GRPCERT_THREADS)");
    cmd->add_option("--order-cap", config.subgroup_order_cap,
                    "subgroup enumeration order cap");
    cmd->add_option("--out", config.output_path, "report file path");
    cmd->add_option("--format", config.format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));
  };

  CLI::App* catalog = app.add_subcommand("catalog", "group catalog");
  catalog->add_subcommand("list", "list constructors and the standard sweep");

  CLI::App* subgroups =
      app.add_subcommand("subgroups", "enumerate the subgroup lattice");
  subgroups->add_option("--group", group_spec, "group spec")->required();
  subgroups->add_flag("--classify", classify,
                      "classify subgroups avoiding the center");
  add_common(subgroups);

  CLI::App* table = app.add_subcommand("table", "exact character table");
  table->add_option("--group", group_spec, "group spec")->required();
  add_common(table);

  CLI::App* verify = app.add_subcommand("verify", "verification pipelines");
  CLI::App* rank3 = verify->add_subcommand(
      "rank3", "rank-3 class function: restrictions, case formulas, freeness");
  rank3->add_option("--group", group_spec, "group spec")->required();
  rank3->add_flag("--all-q", all_q, "sweep every valid normal (p,p) subgroup");
  rank3->add_flag("--corrupt-beta", corrupt_beta,
                  "negative control: perturb one class value by +1");
  add_common(rank3);

  CLI::App* abelian = verify->add_subcommand(
      "abelian", "abelian-isotropy construction on the center-sphere model");
  abelian->add_option("--group", group_spec, "group spec")->required();
  abelian->add_option("--rank", rank, "expected isotropy rank (checked)");
  abelian->add_flag("--sweep-injections", config.sweep_injections,
                    "recompute with permuted torsion bases");
  add_common(abelian);

  CLI::App* amalgam = verify->add_subcommand(
      "amalgam", "dimension-function obstruction for the glued vertex groups");
  amalgam->add_option("--p", p, "odd prime")->required();
  amalgam->add_option("--degree-bound", config.degree_bound,
                      "degree bound (default 2p^2)");
  add_common(amalgam);

  CLI::App* complex_cmd = app.add_subcommand("complex", "chain complexes");
  CLI::App* demo = complex_cmd->add_subcommand(
      "demo", "search spherical classes and certify projectivity");
  demo->add_option("--group", group_spec, "group spec")->required();
  demo->add_option("--n", n, "resolution degree (>= 2)")->required();
  demo->add_option("--rank", rank, "number of sphere factors")->required();
  demo->add_option("--bound", config.cocycle_bound,
                   "cocycle coefficient bound");
  add_common(demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (catalog->parsed()) return cmd_catalog_list();
    if (subgroups->parsed()) return cmd_subgroups(group_spec, classify, config);
    if (table->parsed()) return cmd_table(group_spec, config);
    if (verify->parsed()) {
      if (rank3->parsed())
        return cmd_verify_rank3(group_spec, all_q, corrupt_beta, config);
      if (abelian->parsed())
        return cmd_verify_abelian(group_spec, rank, config);
      if (amalgam->parsed()) return cmd_verify_amalgam(p, config);
      std::cerr << "verify needs a subcommand (rank3 | abelian | amalgam)\n";
      return 2;
    }
    if (complex_cmd->parsed()) {
      if (demo->parsed()) return cmd_complex_demo(group_spec, n, rank, config);
      std::cerr << "complex needs the demo subcommand\n";
      return 2;
    }
  } catch (const grpcert::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "no command\n";
  return 2;
}
