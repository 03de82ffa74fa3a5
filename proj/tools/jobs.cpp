#include "jobs.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "schema_validator.hpp"
#include "wdk/acceptance.hpp"
#include "wdk/deform.hpp"
#include "wdk/io.hpp"

namespace wdk::cli {

using nlohmann::json;

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> all{"witt",        "frame",       "nilpotence",  "slopes",       "adjoint-nilpotence",
                                              "crystal-eval", "tensors-check", "u-beta",   "match-lifts",  "rz-check",
                                              "deform-universal", "classify", "factor-test", "selftest"};
    return all;
}

std::string schema_id(const std::string& subcommand) { return "urn:wdk:v1:" + subcommand; }

namespace {

struct Check {
    std::string id;
    bool pass = false;
    json detail;
};

class Job {
public:
    Job(const json& in, const JobOptions& opts) : in(in), opts(opts) {}

    const json& in;
    const JobOptions& opts;
    std::optional<int> precision;
    std::vector<Check> checks;
    json fields = json::object();

    // --precision beats the input's "length", which beats the environment default.
    int length(int fallback) {
        if (opts.precision) precision = *opts.precision;
        else if (in.contains("length")) precision = in["length"].get<int>();
        else if (opts.default_precision) precision = *opts.default_precision;
        else precision = fallback;
        return *precision;
    }

    void check(std::string id, bool ok, json detail = nullptr) { checks.push_back({std::move(id), ok, std::move(detail)}); }

    RingPtr ring(const char* key) const { return BaseRing::from_json(in.at(key)); }
    RingPtr field(const char* key) const {
        RingPtr k = ring(key);
        if (!k->is_field()) throw std::invalid_argument(std::string(key) + ": a finite field is required");
        return k;
    }
    HodgeEmbeddingDatum datum() const { return HodgeEmbeddingDatum::from_json(in.at("datum")); }
    WMat square(RingPtr R, int m, const char* key, const HodgeEmbeddingDatum& D) const {
        WMat A = wmat_from_json(R, m, in.at(key));
        if (A.rows() != D.h || A.cols() != D.h)
            throw std::invalid_argument(std::string(key) + ": expected an " + std::to_string(D.h) + "x" + std::to_string(D.h) + " matrix");
        return A;
    }
};

std::string padded(int i, int width) {
    std::string s = std::to_string(i);
    return std::string(std::max(0, width - static_cast<int>(s.size())), '0') + s;
}

json elems_json(const std::vector<Elem>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(elem_to_json(x));
    return a;
}

// ------------------------------------------------------------------ witt

void witt_job(Job& j) {
    RingPtr R = j.ring("ring");
    const int m = j.length(3);
    const WittVec x = witt_from_json(R, m, j.in.at("x"));
    std::optional<WittVec> y;
    if (j.in.contains("y")) y = witt_from_json(R, m, j.in["y"]);

    std::vector<std::string> ops;
    if (j.in.contains("ops")) {
        ops = j.in["ops"].get<std::vector<std::string>>();
    } else {
        ops = {"ghost", "negation", "verschiebung"};
        if (m >= 2 || R->char_exp() == 1) ops.push_back("frobenius");
        if (y) ops.insert(ops.end(), {"sum", "difference", "product"});
    }
    auto need_y = [&](const std::string& op) -> const WittVec& {
        if (!y) throw std::invalid_argument("operation \"" + op + "\" needs \"y\"");
        return *y;
    };
    json values = json::object();
    for (const auto& op : ops) {
        if (op == "sum") values[op] = witt_to_json(x + need_y(op));
        else if (op == "difference") values[op] = witt_to_json(x - need_y(op));
        else if (op == "product") values[op] = witt_to_json(x * need_y(op));
        else if (op == "negation") values[op] = witt_to_json(-x);
        else if (op == "inverse") values[op] = x.is_unit() ? witt_to_json(x.inverse()) : json(nullptr);
        else if (op == "frobenius") values[op] = witt_to_json(frobenius(x));
        else if (op == "verschiebung") values[op] = witt_to_json(verschiebung(x));
        else if (op == "ghost") values[op] = elems_json(ghost(x));
    }

    // Ghost components are ring homomorphisms W_m(R) -> R.
    if (y) {
        const auto gx = ghost(x), gy = ghost(*y), gs = ghost(x + *y), gp = ghost(x * *y);
        bool add = true, mul = true;
        for (int n = 0; n < m; ++n) {
            add = add && gs[n] == gx[n] + gy[n];
            mul = mul && gp[n] == gx[n] * gy[n];
        }
        j.check("ghost_additive", add);
        j.check("ghost_multiplicative", mul);
    }
    j.check("frobenius_verschiebung_is_p", frobenius_to(verschiebung_extend(x), m) == x.times_int(R->p()));
    if (x.is_unit()) j.check("inverse_is_two_sided", x * x.inverse() == WittVec::one(R, m));

    j.fields["ring"] = R->to_json();
    j.fields["values"] = values;
}

// ------------------------------------------------------------------ frame

void frame_job(Job& j) {
    const int m = j.length(3);
    Frame F = j.in.at("kind") == "witt" ? Frame::witt(j.ring("ring"), m)
                                         : Frame::relative(PDThickening::from_json(j.in.at("thickening")), m);
    if (j.in.contains("truncate")) F = F.truncate(j.in["truncate"].get<int>());
    Rng rng(j.opts.seed);
    for (const auto& c : F.axiom_report(rng, j.in.value("samples", 16))) j.check(c.at("id"), c.at("pass"));
    j.fields["kind"] = F.kind() == Frame::Kind::Witt ? "witt" : "relative";
    j.fields["frame_length"] = F.length();
    j.fields["has_sigma"] = F.has_sigma();
    j.fields["ring"] = F.ring()->to_json();
}

// ------------------------------------------------------------------ nilpotence

void nilpotence_job(Job& j) {
    RingPtr R = j.ring("ring");
    const int m = j.length(2);
    Window W;
    if (j.in.contains("psi")) {
        W.psi = wmat_from_json(R, m, j.in["psi"]);
        W.rank0 = j.in["rank0"].get<int>();
        if (!W.psi.is_square() || W.rank0 > W.psi.rows()) throw std::invalid_argument("psi must be square with rank0 <= its size");
        W.rank1 = W.psi.rows() - W.rank0;
    } else {
        W = display_to_window(display_from_standard_datum(j.in["degrees"].get<std::vector<int>>(), wmat_from_json(R, m, j.in["phi"])));
    }
    const bool nil = zink_nilpotence(W);
    j.check("zink_nilpotent", nil);
    j.fields["nilpotent"] = nil;
    j.fields["window"] = {{"rank0", W.rank0}, {"rank1", W.rank1}, {"psi", wmat_to_json(W.psi)}};
}

// ------------------------------------------------------------------ slopes

int valuation(const Elem& a, int M) {
    int v = M;
    for (i64 c : a.coords())
        if (c != 0) v = std::min(v, vp(c, a.ring()->p()));
    return v;
}

void polygon_checks(Job& j, const std::string& prefix, const Isocrystal& X, const NewtonPolygon& P) {
    const int n = X.A.rows(), M = X.ring()->char_exp();
    int total = 0;
    bool integral = true;
    Rational weighted = 0;
    for (const auto& [lambda, mult] : P.slopes) {
        total += mult;
        const Rational w = lambda * mult;
        integral = integral && w.denominator() == 1;
        weighted += w;
    }
    j.check(prefix + "breakpoints_integral", integral);
    j.check(prefix + "multiplicities_sum_to_rank", total == n);
    const Elem det = determinant(X.A);
    if (!det.is_zero()) {
        const Rational expected(valuation(det, M) - static_cast<i64>(n) * X.denominator_exp);
        j.check(prefix + "determinant_valuation", weighted == expected,
                {{"v_det", rational_str(expected)}, {"slope_sum", rational_str(weighted)}});
    }
}

void slopes_job(Job& j) {
    const int p = j.in.at("p").get<int>();
    const int r = j.in.value("r", 1);
    std::vector<i64> minpoly = j.in.contains("minpoly") ? j.in["minpoly"].get<std::vector<i64>>() : BaseRing::default_minpoly(p, r);
    if (static_cast<int>(minpoly.size()) != r + 1 && j.in.contains("r"))
        throw std::invalid_argument("minpoly degree does not match r");
    const int M = j.length(max_precision(p));
    if (M > max_precision(p))
        throw PrecisionError("p-adic precision " + std::to_string(M) + " exceeds the 64-bit limit " + std::to_string(max_precision(p)) +
                             " for p = " + std::to_string(p));
    RingPtr G = BaseRing::galois(p, M, minpoly);
    const int guard = j.in.value("guard", 2);
    auto isocrystal = [&](const json& item) {
        Isocrystal X{emat_from_json(G, item.at("matrix")), item.value("denominator_exp", 0)};
        if (!X.A.is_square()) throw std::invalid_argument("slopes: the matrix must be square");
        return X;
    };
    if (j.in.contains("matrix")) {
        const Isocrystal X = isocrystal(j.in);
        const NewtonPolygon P = newton_slopes(X, guard);
        j.fields["slopes"] = P.to_json();
        polygon_checks(j, "", X, P);
        return;
    }
    std::vector<Isocrystal> xs;
    for (const auto& item : j.in["batch"]) xs.push_back(isocrystal(item));
    const auto results = newton_slopes_batch(xs, guard);
    json out = json::array();
    for (size_t i = 0; i < results.size(); ++i) {
        const std::string prefix = "item_" + padded(static_cast<int>(i), 4) + ".";
        j.check(prefix + "computed", results[i].ok, results[i].ok ? json(nullptr) : json(results[i].error));
        if (results[i].ok) {
            out.push_back({{"slopes", results[i].polygon.to_json()}});
            polygon_checks(j, prefix, xs[i], results[i].polygon);
        } else {
            out.push_back({{"error", results[i].error}});
        }
    }
    j.fields["results"] = out;
}

// ------------------------------------------------------------------ adjoint nilpotence

void adjoint_job(Job& j) {
    const auto D = j.datum();
    RingPtr k = j.field("ring");
    const WMat U = j.square(k, j.length(2), "U", D);
    const bool in_group = fixes_tensors(U, D);
    j.check("u_in_group", in_group);
    if (!in_group) return;
    const bool adj = adjoint_nilpotence(U, D), eta = nilpotent_wrt_eta(U, D);
    j.check("adjoint_nilpotent", adj);
    j.check("eta_nilpotence_implies_adjoint_nilpotence", !eta || adj);
    j.fields["adjoint_nilpotent"] = adj;
    j.fields["nilpotent_wrt_eta"] = eta;
    j.fields["adjoint_slopes"] = adjoint_slopes(U, D).to_json();
    j.fields["framing_slopes"] = newton_slopes(framing_element(U, D)).to_json();
}

// ------------------------------------------------------------------ crystals and tensors

PDThickening thickening(const Job& j) { return PDThickening::from_json(j.in.at("thickening")); }

int crystal_length(Job& j, const PDThickening& T) {
    // The Cartier lift for W_e(k) -> k uses e - 1 coordinates of U.
    return j.length(T.rule() == PDRule::Canonical ? T.B()->char_exp() + 1 : 2);
}

void crystal_job(Job& j) {
    const auto D = j.datum();
    const auto T = thickening(j);
    const WMat U = j.square(T.A(), crystal_length(j, T), "U", D);
    const auto E = evaluate_banal_crystal(U, D, T, j.in.value("tensor", -1));
    j.check("fv_is_p", check_fv(E));
    j.fields["evaluation"] = E.to_json();
}

void tensors_job(Job& j) {
    const auto D = j.datum();
    const auto T = thickening(j);
    const WMat U = j.square(T.A(), crystal_length(j, T), "U", D);
    const auto tts = tate_tensors(D, T);
    const auto equivariant = check_frobenius_equivariance(U, D, T);
    json list = json::array();
    for (size_t i = 0; i < tts.size(); ++i) {
        const std::string prefix = "tensor_" + padded(static_cast<int>(i), 2) + ".";
        j.check(prefix + "in_twisted_fil0", in_twisted_fil0(tts[i], D));
        j.check(prefix + "frobenius_equivariant", equivariant[i]);
        list.push_back({{"index", tts[i].index}, {"m", tts[i].m}, {"n", tts[i].n}, {"weight", tts[i].weight}, {"name", D.tensors[i].name}});
    }
    j.fields["tensors"] = list;
}

void u_beta_job(Job& j) {
    const auto D = j.datum();
    RingPtr R = j.ring("ring");
    const int m = j.length(2);
    const WMat U = j.square(R, m, "U", D);
    const auto W = banal_tensor_window(U, D);
    const bool given = j.in.contains("beta");
    const DisplayGroupElement beta =
        given ? make_display_group_element(D, j.square(R, m + 1, "beta", D)) : DisplayGroupElement{WMat::identity(D.h, WittVec::zero(R, m + 1))};
    const SmuReport smu = check_smu_structure(W, D, beta);
    j.check("smu.tensors_in_fil0", smu.tensors_in_fil0);
    j.check("smu.mu_shaped_trivialization", smu.mu_shaped_trivialization);
    j.check("smu.frobenius_equivariant", smu.frobenius_equivariant);
    j.fields["smu"] = smu.to_json();
    if (!smu.all()) return;
    const WMat Ub = extract_U_beta(W, beta, D);
    j.fields["U_beta"] = wmat_to_json(Ub);
    j.check("u_beta_in_group", fixes_tensors(Ub, D));
    if (!given) j.check("identity_roundtrip", Ub == U);
    if (j.in.contains("h")) {
        const auto h = make_display_group_element(D, j.square(R, m + 1, "h", D));
        j.check("twist_law", extract_U_beta(W, beta * h, D) == mu_action(Ub, h, D));
    }
}

void match_job(Job& j) {
    const auto D = j.datum();
    const auto T = thickening(j);
    if (T.rule() != PDRule::SquareZero) throw std::invalid_argument("match-lifts: the thickening must be square-zero");
    const int m = j.length(2);
    const WMat U1 = j.square(T.B(), m, "U1", D), U2 = j.square(T.B(), m, "U2", D);
    try {
        const auto h = match_lifts(U1, U2, D, T);
        j.check("converged", true);
        j.check("substitution", mu_action(U2, h, D, T) == U1);
        j.check("relative_display_group", in_relative_display_group(h, D, T));
        j.fields["h"] = wmat_to_json(h.g);
    } catch (const NonConvergence& e) {
        j.check("converged", false, e.what());
    }
}

void rz_job(Job& j) {
    const auto D = j.datum();
    RingPtr k = j.field("ring");
    const int m = j.length(2);
    const QuasiIsogeny g{j.square(k, m, "g", D), j.in.value("exp", 0)};
    const auto r = quasi_isogeny_check(g, j.square(k, m, "U", D), j.square(k, m, "U_prime", D), D);
    j.check("fixes_tensors", r.fixes_tensors);
    j.check("intertwines", r.intertwines);
}

// ------------------------------------------------------------------ deformations

void deform_universal_job(Job& j) {
    const auto D = j.datum();
    RingPtr k = j.field("residue_field");
    const int p_power = j.in.at("p_power").get<int>(), max_degree = j.in.at("max_degree").get<int>();
    const WMat u0 = j.square(k, j.length(p_power + 1), "u0", D);
    const auto U = universal_deformation(u0, D, p_power, max_degree);
    RingPtr R = U.ring.ring();
    const int m = U.u_univ.zero().length();
    j.check("u_univ_fixes_tensors", fixes_tensors(U.u_univ, D));
    j.check("reduces_to_u0", w_map(RingHom::reduction(R, k), U.u_univ) == w_truncate(u0, m));
    j.check("compatible_with_gl", universal_compatibility(D, k, p_power, max_degree));
    json ring = U.ring.to_json();
    ring["ring"] = R->to_json();
    j.fields["deformation_ring"] = ring;
    j.fields["deformation_length"] = m;
    j.fields["h_univ"] = wmat_to_json(U.h_univ);
    j.fields["u_univ"] = wmat_to_json(U.u_univ);
}

struct DeformationInput {
    HodgeEmbeddingDatum D;
    WMat U, u0;
};

DeformationInput deformation_input(Job& j) {
    const auto D = j.datum();
    RingPtr R = j.ring("ring");
    RingPtr k = j.field("residue_field");
    const int m = j.length(2);
    const int L = j.in.value("u0_length", m + R->char_exp() - 1);
    return {D, j.square(R, m, "U", D), j.square(k, L, "u0", D)};
}

void classify_job(Job& j) {
    const auto [D, U, u0] = deformation_input(j);
    try {
        const auto C = classify_deformation(U, u0, D);
        j.check("converged", true);
        RingPtr R = U.zero().ring();
        const int m = U.zero().length();
        const auto basis = opposite_unipotent_basis(D);
        const WMat u0R = u0.map([&](const WittVec& x) { return witt_from_residue(x, R, m); });
        const WMat hu = basis.empty() ? u0R : inverse(unipotent_element(basis, C.coordinates, D.h, m)) * u0R;
        j.check("substitution", mu_action(hu, C.gauge, D) == U);
        j.check("gauge_fixes_tensors", C.gauge_fixes_tensors);
        j.fields["classification"] = C.to_json();
    } catch (const NonConvergence& e) {
        j.check("converged", false, e.what());
    }
}

void factor_job(Job& j) {
    const auto [D, U, u0] = deformation_input(j);
    try {
        const auto F = tensor_factorization_test(U, u0, D);
        j.check("converged", true);
        j.check("factors", F.factors);
        if (F.witness) {
            j.check("witness.tensors_in_fil0", F.witness->tensors_in_fil0);
            j.check("witness.mu_shaped_trivialization", F.witness->mu_shaped_trivialization);
            j.check("witness.frobenius_equivariant", F.witness->frobenius_equivariant);
        }
        j.fields["factorization"] = F.to_json();
    } catch (const NonConvergence& e) {
        j.check("converged", false, e.what());
    }
}

// ------------------------------------------------------------------ selftest

void selftest_job(Job& j) {
    std::vector<int> only = j.opts.only;
    if (only.empty() && j.in.contains("criteria")) only = j.in["criteria"].get<std::vector<int>>();
    for (int id : only)
        if (id < 1 || id > acceptance_criterion_count()) throw std::invalid_argument("no acceptance criterion " + std::to_string(id));
    for (const auto& r : run_acceptance(j.opts.seed, only)) {
        json detail = json::object();
        if (!r.error.empty()) detail["error"] = r.error;
        if (!r.correct) detail["correct"] = false;
        if (j.opts.timings) {
            detail["seconds"] = r.seconds;
            detail["limit_seconds"] = r.limit_seconds;
            detail["details"] = r.details;
        }
        j.check("criterion_" + padded(r.id, 2) + "." + r.name, r.pass(), detail.empty() ? json(nullptr) : detail);
    }
}

const std::map<std::string, std::function<void(Job&)>>& handlers() {
    static const std::map<std::string, std::function<void(Job&)>> h{
        {"witt", witt_job},
        {"frame", frame_job},
        {"nilpotence", nilpotence_job},
        {"slopes", slopes_job},
        {"adjoint-nilpotence", adjoint_job},
        {"crystal-eval", crystal_job},
        {"tensors-check", tensors_job},
        {"u-beta", u_beta_job},
        {"match-lifts", match_job},
        {"rz-check", rz_job},
        {"deform-universal", deform_universal_job},
        {"classify", classify_job},
        {"factor-test", factor_job},
        {"selftest", selftest_job},
    };
    return h;
}

json base_report(const std::string& subcommand, const JobOptions& opts) {
    return {{"schema", "wdk.report/1"}, {"subcommand", subcommand}, {"seed", opts.seed}};
}

JobOutcome failure(const std::string& subcommand, const JobOptions& opts, int code, std::vector<std::string> diagnostics) {
    JobOutcome out;
    out.exit_code = code;
    out.diagnostics = std::move(diagnostics);
    out.report = base_report(subcommand, opts);
    out.report["pass"] = false;
    out.report["checks"] = json::array();
    out.report["error"] = code == kInvalidInput ? "invalid input" : code == kPrecision ? "precision" : "internal error";
    out.report["diagnostics"] = out.diagnostics;
    return out;
}

}  // namespace

JobOutcome run_job(const std::string& subcommand, const json& input, const JobOptions& opts) {
    const auto& hs = handlers();
    auto it = hs.find(subcommand);
    if (it == hs.end()) return failure(subcommand, opts, kInvalidInput, {"unknown subcommand " + subcommand});

    std::vector<std::string> issues;
    for (const auto& issue : builtin_schemas().validate(input, schema_id(subcommand))) issues.push_back(issue.str());
    if (!issues.empty()) return failure(subcommand, opts, kInvalidInput, std::move(issues));

    Job job(input, opts);
    try {
        it->second(job);
    } catch (const PrecisionError& e) {
        return failure(subcommand, opts, kPrecision, {e.what()});
    } catch (const NonConvergence& e) {
        job.check("converged", false, e.what());
    } catch (const std::invalid_argument& e) {
        return failure(subcommand, opts, kInvalidInput, {e.what()});
    } catch (const NotInvertible& e) {
        return failure(subcommand, opts, kInvalidInput, {std::string("not invertible: ") + e.what()});
    } catch (const json::exception& e) {
        return failure(subcommand, opts, kInvalidInput, {e.what()});
    } catch (const std::exception& e) {
        return failure(subcommand, opts, kInternal, {e.what()});
    }

    std::stable_sort(job.checks.begin(), job.checks.end(), [](const Check& a, const Check& b) { return a.id < b.id; });
    JobOutcome out;
    out.report = base_report(subcommand, opts);
    for (auto& [k, v] : job.fields.items()) out.report[k] = v;
    if (job.precision) out.report["precision"] = *job.precision;
    json checks = json::array();
    bool pass = true;
    for (const auto& c : job.checks) {
        json e{{"id", c.id}, {"pass", c.pass}};
        if (!c.detail.is_null()) e["detail"] = c.detail;
        checks.push_back(std::move(e));
        pass = pass && c.pass;
    }
    out.report["checks"] = std::move(checks);
    out.report["pass"] = pass;
    return out;
}

std::string render_text(const json& report) {
    std::ostringstream os;
    os << report.value("subcommand", "?") << ": " << (report.value("pass", false) ? "PASS" : "FAIL") << "\n";
    for (const auto& c : report.value("checks", json::array())) {
        os << "  [" << (c.value("pass", false) ? "PASS" : "FAIL") << "] " << c.value("id", "");
        if (c.contains("detail")) os << "  " << c["detail"].dump();
        os << "\n";
    }
    for (const auto& [k, v] : report.items()) {
        if (k == "checks" || k == "pass" || k == "subcommand" || k == "schema") continue;
        os << k << ": " << v.dump() << "\n";
    }
    return os.str();
}

}  // namespace wdk::cli
