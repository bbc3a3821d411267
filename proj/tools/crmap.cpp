#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <crmap/ahlfors.hpp>
#include <crmap/catalog.hpp>
#include <crmap/error.hpp>
#include <crmap/normalform.hpp>
#include <crmap/segre.hpp>
#include <crmap/suite.hpp>

using namespace crmap;
using json = nlohmann::ordered_json;

namespace
{

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string map;
    std::string name;
    int order = 8;
    std::string field = "exact";
    std::uint64_t seed = 0;
    double tol = 1e-10;
    std::size_t points = 50;
    std::string out;
    std::string check = "all";
    std::string show;
};

int default_order()
{
    const char *env = std::getenv("CRMAP_DEFAULT_ORDER");
    if (env == nullptr || *env == '\0') {
        return 8;
    }
    try {
        std::size_t used = 0;
        int n = std::stoi(env, &used);
        if (used != std::string(env).size() || n < 2) {
            throw usage_error("");
        }
        return n;
    } catch (const std::exception &) {
        throw usage_error(std::string("CRMAP_DEFAULT_ORDER must be an integer >= 2, got '") + env + "'");
    }
}

Field field_of(const RunConfig &c)
{
    return c.field == "f64" ? Field::f64 : Field::exact;
}

MapDef load_map(const RunConfig &c)
{
    if (c.map.empty()) {
        throw usage_error("--map is required");
    }
    if (c.map.rfind("catalog:", 0) == 0) {
        try {
            return catalog_get(c.map.substr(8)).map;
        } catch (const error &e) {
            throw usage_error(e.what());
        }
    }
    std::ifstream in(c.map);
    if (!in) {
        throw usage_error("cannot read map file " + c.map);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    std::vector<MapDef> maps;
    try {
        maps = parse_mapfile(ss.str()).maps;
    } catch (const parse_error &e) {
        throw usage_error(c.map + ":" + e.what());
    }
    for (const auto &m : maps) {
        if (c.name.empty() || m.name == c.name) {
            return m;
        }
    }
    throw usage_error(c.name.empty() ? c.map + " contains no map" : "no map named " + c.name + " in " + c.map);
}

json check_json(const std::string &id, bool pass, const std::string &detail, json data = json::object())
{
    json j;
    j["id"] = id;
    j["verdict"] = pass ? "pass" : "fail";
    j["detail"] = detail;
    j["data"] = std::move(data);
    return j;
}

json check_json(const CheckResult &r)
{
    json facts = json::object();
    for (const auto &[k, v] : r.facts) {
        facts[k] = v;
    }
    json j = check_json(r.id, r.verdict == Verdict::pass, r.detail, facts);
    j["verdict"] = verdict_name(r.verdict);
    j["title"] = r.title;
    j["seconds"] = r.seconds;
    return j;
}

json verify(const RunConfig &c, json &result)
{
    auto H = load_map(c);
    auto res = mapping_residual(H, c.order, field_of(c));
    bool zero = field_of(c) == Field::exact ? res.zero() : res.zero_within(c.tol);
    result["order"] = c.order;
    result["residual_zero"] = zero;
    result["terms"] = res.series.terms().size();
    if (!zero && res.first_term) {
        result["min_violating_order"] = *res.min_violating_order;
        result["first_term"] = res.series.monomial_string(res.first_term->first) + ": " +
                               res.first_term->second.to_string();
    }
    return json::array({check_json("residual", zero, zero ? "" : result.value("first_term", ""))});
}

json classify_cmd(const RunConfig &c, json &result)
{
    auto H = load_map(c);
    ClassifyOptions opt;
    opt.tol = c.tol;
    opt.seed = c.seed;
    opt.borderline_retry = field_of(c) == Field::f64;
    auto l = classify(H, c.order, field_of(c), opt);
    result["label"] = label_name(l.label);
    result["alpha"] = l.inv.alpha.to_string();
    result["beta"] = l.inv.beta.to_string();
    result["lambda"] = l.inv.lambda.to_string();
    result["mu"] = {l.inv.mu[0].to_string(), l.inv.mu[1].to_string()};
    result["nu"] = {l.inv.nu[0].to_string(), l.inv.nu[1].to_string()};
    result["sigma"] = l.inv.sigma.to_string();
    result["rank"] = l.rank;
    result["order"] = c.order;
    if (!l.note.empty()) {
        result["note"] = l.note;
    }
    return json::array({check_json("classify", true, "")});
}

json segre_cmd(const RunConfig &c, json &result)
{
    static const std::set<std::string> known{"all", "h", "segre1", "rref"};
    if (known.count(c.check) == 0) {
        throw usage_error("--check must be one of all, h, segre1, rref");
    }
    auto H = load_map(c);
    auto n = normalize(expand_map(H, c.order, field_of(c)), c.order);
    result["alpha"] = n.inv.alpha.to_string();
    result["beta"] = n.inv.beta.to_string();
    result["lambda"] = n.inv.lambda.to_string();
    const auto &N = n.normalized;
    int k = std::max(2, c.order - 2);
    json checks = json::array();
    bool all = c.check == "all";
    if (all || c.check == "segre1") {
        auto s = first_segre_restrict(N, k, c.tol);
        checks.push_back(check_json("segre1.f", s.f_check.pass, s.f_check.detail));
        checks.push_back(check_json("segre1.g", s.g_check.pass, s.g_check.detail));
        auto g = gw_on_segre(N, k, c.tol);
        checks.push_back(check_json("segre1.gw", g.closed_form.pass, g.closed_form.detail,
                                    {{"displayed_form", g.printed_form.pass ? "pass" : g.printed_form.detail}}));
        if (n.inv.lambda.is_zero()) {
            auto hw = hw_on_segre(N, k, c.tol);
            checks.push_back(check_json("segre1.hw", hw.pass, hw.detail));
        }
    }
    if (all || c.check == "h") {
        if (n.inv.lambda.is_zero()) {
            auto h = h_identities(N, k);
            int f = h.first_nonzero(c.tol);
            checks.push_back(check_json("h", f < 0, f < 0 ? "" : "h" + std::to_string(f + 1) + " does not vanish"));
        } else {
            json j = check_json("h", true, "lambda != 0");
            j["verdict"] = "skipped";
            checks.push_back(j);
        }
    }
    if (all || c.check == "rref") {
        if (n.inv.alpha.is_exact() && n.inv.beta.is_exact()) {
            auto sys = solve_linear_system(n.inv.alpha, n.inv.beta);
            checks.push_back(check_json("rref.display", sys.matches_display.pass, sys.matches_display.detail,
                                        {{"rank", sys.rank}, {"pivots", sys.pivots}}));
            checks.push_back(check_json("rref.solution", sys.matches_solution.pass, sys.matches_solution.detail));
            checks.push_back(check_json("rref.solves_all", sys.solves_all.pass, sys.solves_all.detail));
        } else {
            json j = check_json("rref", true, "needs exact invariants");
            j["verdict"] = "skipped";
            checks.push_back(j);
        }
    }
    return checks;
}

json ahlfors_cmd(const RunConfig &c, json &result)
{
    auto H = load_map(c);
    auto Q = compute_Q(H, c.order, field_of(c));
    auto p = pluriharmonic_test(Q, c.order, c.tol);
    auto pts = sample_points(H.source, c.points, c.seed);
    std::map<int, int> hist;
    for (int r : ahlfors_rank(H, pts, c.tol)) {
        hist[r] += 1;
    }
    json h = json::object();
    for (const auto &[r, n] : hist) {
        h[std::to_string(r)] = n;
    }
    result["rank_histogram"] = h;
    result["pluriharmonic"] = p.pass;
    if (!p.pass) {
        result["violating_weight"] = *p.violating_weight;
        result["violating_term"] = p.monomial + ": " + p.coefficient.to_string();
    }
    result["q_certificate_order"] = Q.certificate_order;
    bool flat = hist.size() == 1 && hist.begin()->first == 0;
    return json::array({check_json("certificate", Q.certificate_order == c.order, ""),
                        check_json("isometry_chain", flat == p.pass,
                                   flat == p.pass ? "" : "pluriharmonicity and vanishing rank disagree")});
}

json boundary_cmd(const RunConfig &c, json &result)
{
    auto H = load_map(c);
    auto rep = numeric_boundary_check(H, H.source, H.target, c.points, c.seed, c.tol);
    result["max_residual"] = rep.max_residual;
    result["points_used"] = rep.points_used;
    result["excluded"] = rep.excluded;
    return json::array({check_json("boundary", rep.pass, rep.pass ? "" : "max residual above tolerance")});
}

json ke_cmd(const RunConfig &c, json &result)
{
    auto rep = ke_determinant_check(c.points, c.seed, c.tol);
    json pts = json::array();
    for (const auto &p : rep.points) {
        pts.push_back({{"rho", p.rho}, {"log_error", p.log_error}, {"plain_error", p.plain_error}});
    }
    result["m"] = rep.m;
    result["log_pass"] = rep.log_pass;
    result["plain_pass"] = rep.plain_pass;
    result["interpretation"] = rep.interpretation;
    result["dilation"] = rep.dilation;
    result["points"] = pts;
    bool one = rep.log_pass != rep.plain_pass;
    return json::array({check_json("unique_interpretation", one, one ? "" : "not exactly one reading passes"),
                        check_json("dilation", rep.dilation_pass, "")});
}

json suite_cmd(const RunConfig &c, json &)
{
    SuiteOptions opt;
    opt.seed = c.seed;
    std::vector<CheckResult> rs;
    if (c.check == "all") {
        rs = run_paper_suite(opt);
    } else {
        std::vector<std::string> ids;
        std::stringstream ss(c.check);
        for (std::string id; std::getline(ss, id, ',');) {
            ids.push_back(id);
        }
        rs = run_checks(ids, opt);
    }
    json checks = json::array();
    for (const auto &r : rs) {
        if (r.verdict == Verdict::skipped) {
            throw usage_error("unknown check " + r.id);
        }
        checks.push_back(check_json(r));
    }
    return checks;
}

int emit(const RunConfig &c, const json &checks, const json &result)
{
    bool pass = true;
    for (const auto &k : checks) {
        pass = pass && k["verdict"] != "fail";
    }
    json report;
    report["schema"] = "crmap-report/1";
    report["engine"] = engine_version();
    report["command"] = c.command;
    report["config"] = {{"map", c.map}, {"order", c.order}, {"field", c.field}, {"seed", c.seed},
                        {"tol", c.tol},  {"points", c.points}, {"check", c.check}};
    report["verdict"] = pass ? "pass" : "fail";
    report["checks"] = checks;
    report["result"] = result;
    auto text = report.dump(2) + "\n";
    if (c.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(c.out);
        if (!f) {
            throw usage_error("cannot write " + c.out);
        }
        f << text;
    }
    return pass ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    RunConfig cfg;
    try {
        cfg.order = default_order();
    } catch (const usage_error &e) {
        std::cerr << "crmap: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"crmap: normal forms, Segre-set identities and Ahlfors tensors of CR maps"};
    app.require_subcommand(1);
    auto common = [&](CLI::App *s, bool map) {
        if (map) {
            s->add_option("--map", cfg.map, "catalog:NAME or a map file")->required();
            s->add_option("--name", cfg.name, "map to use from a file with several maps");
        }
        s->add_option("--order", cfg.order, "weighted truncation order")->check(CLI::Range(2, 60));
        s->add_option("--field", cfg.field, "exact or f64")->check(CLI::IsMember({"exact", "f64"}));
        s->add_option("--seed", cfg.seed, "sampling seed");
        s->add_option("--tol", cfg.tol, "tolerance")->check(CLI::PositiveNumber);
        s->add_option("--out", cfg.out, "write the JSON report here");
    };
    auto *verify_c = app.add_subcommand("verify", "mapping-equation residual");
    common(verify_c, true);
    auto *classify_c = app.add_subcommand("classify", "normal form and label");
    common(classify_c, true);
    auto *catalog_c = app.add_subcommand("catalog", "built-in maps");
    catalog_c->require_subcommand(1);
    catalog_c->add_subcommand("list", "list catalog names");
    auto *show_c = catalog_c->add_subcommand("show", "print a catalog map in map-file syntax");
    show_c->add_option("name", cfg.show, "catalog name")->required();
    auto *segre_c = app.add_subcommand("segre", "Segre-set identities");
    common(segre_c, true);
    segre_c->add_option("--check", cfg.check, "all, h, segre1 or rref");
    auto *ahlfors_c = app.add_subcommand("ahlfors", "Q factor, pluriharmonicity and Ahlfors rank");
    common(ahlfors_c, true);
    ahlfors_c->add_option("--points", cfg.points, "sample points")->check(CLI::PositiveNumber);
    auto *boundary_c = app.add_subcommand("boundary", "numeric boundary check");
    common(boundary_c, true);
    boundary_c->add_option("--points", cfg.points, "sample points")->check(CLI::PositiveNumber);
    auto *ke_c = app.add_subcommand("ke", "Kähler-Einstein determinant check");
    common(ke_c, false);
    ke_c->add_option("--points", cfg.points, "sample points")->check(CLI::PositiveNumber);
    auto *suite_c = app.add_subcommand("paper-suite", "every acceptance check");
    common(suite_c, false);
    suite_c->add_option("--check", cfg.check, "all, or a comma-separated list of check ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (catalog_c->parsed()) {
            if (show_c->parsed()) {
                try {
                    std::cout << catalog_show(cfg.show);
                } catch (const error &e) {
                    throw usage_error(e.what());
                }
            } else {
                for (const auto &n : catalog_names()) {
                    std::cout << n << "\n";
                }
            }
            return 0;
        }
        if (ke_c->parsed() && !ke_c->get_option("--points")->count()) {
            cfg.points = 20;
        }
        if (ke_c->parsed() && !ke_c->get_option("--tol")->count()) {
            cfg.tol = 1e-8;
        }
        if (ahlfors_c->parsed() && !ahlfors_c->get_option("--tol")->count()) {
            cfg.tol = 1e-7;
        }
        json result = json::object();
        json checks;
        using Runner = json (*)(const RunConfig &, json &);
        const std::vector<std::pair<CLI::App *, Runner>> runners{
            {verify_c, verify},       {classify_c, classify_cmd}, {segre_c, segre_cmd}, {ahlfors_c, ahlfors_cmd},
            {boundary_c, boundary_cmd}, {ke_c, ke_cmd},             {suite_c, suite_cmd}};
        for (const auto &[sub, run] : runners) {
            if (sub->parsed()) {
                cfg.command = sub->get_name();
                try {
                    checks = run(cfg, result);
                } catch (const usage_error &) {
                    throw;
                } catch (const std::exception &e) {
                    result["error"] = e.what();
                    checks = json::array({check_json(cfg.command, false, e.what())});
                }
            }
        }
        return emit(cfg, checks, result);
    } catch (const usage_error &e) {
        std::cerr << "crmap: " << e.what() << "\n";
        return 2;
    }
}
