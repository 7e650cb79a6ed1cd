#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "qls/invariants.hpp"
#include "qls/jetgeom.hpp"
#include "qls/reduction.hpp"
#include "qls/serialize.hpp"
#include "qls/tolerances.hpp"

using json = nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kVerdictNegative = 1, kInputError = 2, kNumericalFailure = 3 };

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Serializer that pins floating point fields to 17 significant digits so
// reports are byte-identical across runs.
void dump17(const json& j, std::ostream& os, int indent = 0) {
    auto pad = [&](int n) { for (int i = 0; i < n; ++i) os << ' '; };
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) { os << "{}"; return; }
            os << "{\n";
            size_t i = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++i) {
                pad(indent + 2);
                os << json(it.key()).dump() << ": ";
                dump17(it.value(), os, indent + 2);
                if (i + 1 < j.size()) os << ",";
                os << "\n";
            }
            pad(indent);
            os << "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) { os << "[]"; return; }
            os << "[\n";
            for (size_t i = 0; i < j.size(); ++i) {
                pad(indent + 2);
                dump17(j[i], os, indent + 2);
                if (i + 1 < j.size()) os << ",";
                os << "\n";
            }
            pad(indent);
            os << "]";
            return;
        }
        case json::value_t::number_float: os << fmt17(j.get<double>()); return;
        default: os << j.dump(); return;
    }
}

struct Output {
    std::string path;  // empty = stdout
    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot open output file " + path);
        f << text;
    }
};

std::string doc_str(const json& j) {
    std::ostringstream os;
    dump17(j, os);
    os << "\n";
    return os.str();
}

json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw qls::SchemaError("cannot open " + path);
    json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw qls::SchemaError(path + ": " + std::string(e.what()));
    }
    return j;
}

struct GridOpt {
    std::string spec = "0:1:101";
    qls::Grid parse() const {
        qls::Grid g;
        if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &g.t0, &g.t1, &g.n) != 3)
            throw qls::SchemaError("grid must be t0:t1:n");
        if (g.n < 16) throw qls::SchemaError("grid needs n >= 16");
        if (!(g.t0 < g.t1)) throw qls::SchemaError("grid needs t0 < t1");
        return g;
    }
};

json rational_matrix_json(const qls::RatMat& m) {
    json rows = json::array();
    for (const auto& row : m) {
        json r = json::array();
        for (const auto& v : row) r.push_back(qls::rat_str(v));
        rows.push_back(r);
    }
    return rows;
}

json certificate_json(const qls::ReductionCertificate& cert, const qls::Grid& grid) {
    json samples = json::array();
    for (double t : grid.points()) {
        qls::GroupElement g = cert.curve.at(t);
        samples.push_back(json{{"t", t},
                               {"beta", g.beta},
                               {"alpha", g.alpha},
                               {"lambda1", cert.target.lambda1.eval(t)},
                               {"lambda2", cert.target.lambda2.eval(t)}});
    }
    return json{{"mu", cert.target.mu},
                {"beta", cert.curve.beta.str()},
                {"alpha", cert.curve.alpha.str()},
                {"lambda1", cert.target.lambda1.str()},
                {"lambda2", cert.target.lambda2.str()},
                {"coeff_residual", cert.coeff_residual},
                {"solve_residual", cert.solve_residual},
                {"xbar0", cert.xbar0},
                {"samples", samples}};
}

int cmd_transform(const std::string& eq_path, const std::string& curve_path, const GridOpt& gopt,
                  bool verify, double x0, const Output& out) {
    qls::Grid grid = gopt.parse();
    qls::AbelEquation eq = qls::abel_from_json(load_json_file(eq_path));
    qls::GroupCurve curve = qls::curve_from_json(load_json_file(curve_path));
    qls::AbelEquation pushed = qls::pushforward(eq, curve);
    json doc{{"command", "transform"},
             {"input", qls::to_json(eq)},
             {"curve", qls::to_json(curve)},
             {"transformed", qls::to_json(pushed)}};
    json samples = json::array();
    for (double t : grid.points()) {
        json coeffs = json::array();
        for (const auto& c : pushed.coeffs) coeffs.push_back(c.eval(t));
        samples.push_back(json{{"t", t}, {"coeffs", coeffs}});
    }
    doc["samples"] = samples;
    if (verify)
        doc["conjugacy_residual"] =
            qls::flow_conjugacy_residual(eq, curve, x0, grid.t0, grid.t1, 2048);
    out.write(doc_str(doc));
    return kOk;
}

int cmd_invariant(const std::string& eq_path, const GridOpt& gopt, const Output& out) {
    qls::Grid grid = gopt.parse();
    qls::AbelEquation eq = qls::abel_from_json(load_json_file(eq_path));
    std::ostringstream os;
    for (double t : grid.points()) {
        qls::InvariantValue v = qls::liouville_F(eq, t);
        os << "{\"t\": " << fmt17(v.t) << ", \"phi3\": " << fmt17(v.phi3)
           << ", \"dphi3\": " << fmt17(v.dphi3) << ", \"phi5\": " << fmt17(v.phi5) << ", \"F\": "
           << (v.F ? fmt17(*v.F) : std::string("null")) << "}\n";
    }
    out.write(os.str());
    return kOk;
}

int cmd_reduce(const std::string& eq_path, const GridOpt& gopt, double mu,
               const std::optional<std::string>& c_spec, const std::optional<std::string>& beta,
               double tol, const Output& out) {
    qls::Grid grid = gopt.parse();
    qls::AbelEquation eq = qls::abel_from_json(load_json_file(eq_path));
    json doc{{"command", "reduce"}};

    if (c_spec) {
        double c[4];
        if (std::sscanf(c_spec->c_str(), "%lf,%lf,%lf,%lf", &c[0], &c[1], &c[2], &c[3]) != 4)
            throw qls::SchemaError("--c must be c0,c1,c2,c3");
        qls::OneDimReport rep = qls::onedim_candidates(eq, c, grid);
        doc["c"] = json::array({c[0], c[1], c[2], c[3]});
        json branches = json::array();
        for (const auto& b : rep.branches) {
            json bj{{"start", b.start},
                    {"length", b.beta.size()},
                    {"max_residual", b.max_residual},
                    {"certified", b.certified}};
            if (b.certified) {
                bj["coeff_residual"] = b.coeff_residual;
                bj["beta"] = b.beta;
                bj["alpha"] = b.alpha;
                bj["xi"] = b.xi;
            }
            branches.push_back(bj);
        }
        doc["branches"] = branches;
        doc["warnings"] = rep.warnings;
        doc["reducible_1d"] = rep.any_certified();
        out.write(doc_str(doc));
        return rep.any_certified() ? kOk : kVerdictNegative;
    }

    qls::CAReport ca = qls::check_CA(eq, grid);
    doc["CA_max_residual"] = ca.relative();
    doc["reducible_2d"] = ca.integrable;
    if (!ca.integrable) {
        doc["certificate"] = nullptr;
        out.write(doc_str(doc));
        return kVerdictNegative;
    }
    std::optional<qls::TFunc> beta_choice;
    if (beta) beta_choice = qls::TFunc::parse(*beta);
    qls::ReductionCertificate cert = qls::reduce_to_2d(eq, mu, beta_choice, grid, tol);
    doc["certificate"] = certificate_json(cert, grid);
    out.write(doc_str(doc));
    return kOk;
}

int cmd_canonical(const std::string& eq_path, const std::string& beta_src, const GridOpt& gopt,
                  const Output& out) {
    qls::Grid grid = gopt.parse();
    qls::AbelEquation eq = qls::abel_from_json(load_json_file(eq_path));
    qls::CanonicalForm cf = qls::canonical_form(eq, qls::TFunc::parse(beta_src), grid);
    json doc{{"command", "canonical"},
             {"max_f0_residual", cf.max_f0_residual},
             {"max_f1_residual", cf.max_f1_residual},
             {"t", cf.t},
             {"alpha", cf.alpha},
             {"tau", cf.tau},
             {"f2", cf.f2}};
    out.write(doc_str(doc));
    return kOk;
}

int cmd_scheme(const std::string& path, const Output& out) {
    qls::SchemeSpec s = qls::scheme_from_json(load_json_file(path));
    qls::SchemeReport rep = qls::check_scheme(s);
    json doc{{"command", "scheme"},
             {"dim_V", s.v_basis.size()},
             {"dim_W", s.w_basis.size()},
             {"W_subset_V", rep.w_subset_v},
             {"WW_in_W", rep.ww_closed},
             {"WV_in_V", rep.wv_stable}};
    if (rep.ww_witness)
        doc["WW_witness"] = json::array({rep.ww_witness->first, rep.ww_witness->second});
    if (rep.wv_witness)
        doc["WV_witness"] = json::array({rep.wv_witness->first, rep.wv_witness->second});
    if (rep.w_subset_witness) doc["W_subset_witness"] = *rep.w_subset_witness;
    if (rep.ok()) {
        auto ad = qls::representation(s);
        json mats = json::array(), nil = json::array();
        for (const auto& m : ad) {
            mats.push_back(rational_matrix_json(m));
            auto idx = qls::nilpotency_index(m);
            nil.push_back(idx ? json(*idx) : json(nullptr));
        }
        doc["ad_matrices"] = mats;
        doc["nilpotency_index"] = nil;
    }
    out.write(doc_str(doc));
    return rep.ok() ? kOk : kVerdictNegative;
}

json rank_block(const std::vector<qls::JetVF>& fields, const std::vector<qls::JetPoint>& pts) {
    auto ranks = qls::distribution_rank(fields, pts);
    auto spectra = qls::distribution_spectra(fields, pts);
    int generic = 0;
    for (int r : ranks) generic = std::max(generic, r);
    return json{{"field_count", fields.size()},
                {"generic_rank", generic},
                {"ranks", ranks},
                {"spectra", spectra}};
}

int cmd_rank(const std::string& path, int p, std::uint64_t seed, int samples, const Output& out) {
    qls::SchemeSpec s = qls::scheme_from_json(load_json_file(path));
    qls::SchemeJets sj(s);
    qls::JetSpace space{sj.dim_v(), p};
    auto pts = qls::sample_points(space.dim(), samples, seed);
    json doc{{"command", "rank"},
             {"p", p},
             {"seed", seed},
             {"samples", samples},
             {"space_dim", space.dim()}};

    std::vector<qls::JetVF> fields;
    switch (p) {
        case 0: fields = sj.order0_fields(); break;
        case 1: fields = sj.order1_fields(); break;
        case 2: fields = sj.order2_fields(); break;
        default: throw qls::SchemaError("--p must be 0, 1 or 2");
    }
    doc["rank"] = rank_block(fields, pts);
    doc["invariant_count"] = qls::invariant_count(sj, p, samples, seed);

    if (p == 1) {
        // The adjoined brackets are ambiguous; report every variant.
        auto base = sj.order1_base_fields();
        auto cands = sj.order1_bracket_candidates();  // [z_i, J_j] row-major in (i, j)
        auto with = [&](std::initializer_list<int> idx) {
            auto f = base;
            for (int i : idx) f.push_back(cands[i]);
            return f;
        };
        doc["bracket_variants"] = json{{"base_only", rank_block(base, pts)},
                                       {"pair_diag", rank_block(with({0, 3}), pts)},
                                       {"pair_cross", rank_block(with({1, 2}), pts)},
                                       {"all_four", rank_block(with({0, 1, 2, 3}), pts)}};
    }
    if (p == 2 && sj.dim_v() == 4) {
        auto ratio = qls::liouville_ratio(space);
        doc["liouville_first_integral_max_derivative"] =
            qls::first_integral_check(ratio, fields, pts);
    }
    out.write(doc_str(doc));
    return kOk;
}

int cmd_solve(const std::string& eq_path, double x0, const GridOpt& gopt, int steps,
              const Output& out) {
    qls::Grid grid = gopt.parse();
    qls::AbelEquation eq = qls::abel_from_json(load_json_file(eq_path));
    qls::OdeSolution sol = qls::integrate(eq.rhs_fn(), x0, grid.t0, grid.t1, steps);
    std::ostringstream os;
    for (size_t i = 0; i < sol.t.size(); ++i)
        os << fmt17(sol.t[i]) << "," << fmt17(sol.x[i]) << "\n";
    out.write(os.str());
    if (sol.blew_up) {
        std::cerr << "blow-up at t = " << fmt17(sol.blowup_time) << "\n";
        return kNumericalFailure;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-Lie scheme toolkit for Abel equations"};
    app.require_subcommand(1);

    GridOpt gopt;
    Output out;
    double tol = 1e-7;
    app.add_option("--grid", gopt.spec, "evaluation grid t0:t1:n")->capture_default_str();
    app.add_option("--out", out.path, "output file (default stdout)");
    app.add_option("--tol", tol, "certificate tolerance")->capture_default_str();

    auto* t = app.add_subcommand("transform", "push an equation through a group curve");
    std::string eq_path, curve_path;
    bool verify = false;
    double x0 = 0.1;
    t->add_option("equation", eq_path)->required();
    t->add_option("curve", curve_path)->required();
    t->add_flag("--verify", verify, "integrate and check the conjugacy residual");
    t->add_option("--x0", x0, "initial value for the --verify integration");

    auto* inv = app.add_subcommand("invariant", "Liouville invariant data per grid point");
    std::string inv_eq;
    inv->add_option("equation", inv_eq)->required();

    auto* red = app.add_subcommand("reduce", "integrability verdict and reduction certificate");
    std::string red_eq;
    double mu = 0.0;
    std::optional<std::string> c_spec, beta_expr;
    red->add_option("equation", red_eq)->required();
    red->add_option("--mu", mu, "target parameter mu")->capture_default_str();
    red->add_option("--c", c_spec, "one-dimensional target c0,c1,c2,c3");
    red->add_option("--beta", beta_expr, "explicit beta expression for the mu != 0 branch");

    auto* can = app.add_subcommand("canonical", "canonical form from a particular solution");
    std::string can_eq, can_beta;
    can->add_option("equation", can_eq)->required();
    can->add_option("--beta", can_beta, "particular solution expression")->required();

    auto* sch = app.add_subcommand("scheme", "axiom checks and representation matrices");
    std::string sch_path;
    sch->add_option("scheme", sch_path)->required();

    auto* rnk = app.add_subcommand("rank", "jet-space distribution rank report");
    std::string rnk_path;
    int p = 2, samples = 50;
    std::uint64_t seed = 12345;
    rnk->add_option("scheme", rnk_path)->required();
    rnk->add_option("--p", p, "jet order (0, 1 or 2)")->capture_default_str();
    rnk->add_option("--seed", seed, "sampling seed")->capture_default_str();
    rnk->add_option("--samples", samples, "number of sample points")->capture_default_str();

    auto* sol = app.add_subcommand("solve", "integrate an equation, CSV t,x output");
    std::string sol_eq;
    double sol_x0 = 0.1;
    int steps = 1024;
    sol->add_option("equation", sol_eq)->required();
    sol->add_option("--x0", sol_x0, "initial value")->capture_default_str();
    sol->add_option("--steps", steps, "RK4 steps")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*t) return cmd_transform(eq_path, curve_path, gopt, verify, x0, out);
        if (*inv) return cmd_invariant(inv_eq, gopt, out);
        if (*red) return cmd_reduce(red_eq, gopt, mu, c_spec, beta_expr, tol, out);
        if (*can) return cmd_canonical(can_eq, can_beta, gopt, out);
        if (*sch) return cmd_scheme(sch_path, out);
        if (*rnk) return cmd_rank(rnk_path, p, seed, samples, out);
        if (*sol) return cmd_solve(sol_eq, sol_x0, gopt, steps, out);
    } catch (const qls::SchemaError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const qls::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const qls::ReductionError& e) {
        bool input_side = e.kind == qls::ReductionError::Kind::UnsupportedBranch ||
                          e.kind == qls::ReductionError::Kind::NotASolution;
        std::cerr << (input_side ? "input error: " : "numerical failure: ") << e.what() << "\n";
        return input_side ? kInputError : kNumericalFailure;
    } catch (const qls::BlowUpError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const qls::DomainError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kOk;
}
