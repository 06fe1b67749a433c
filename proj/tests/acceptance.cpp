// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "boundrat/bounds.hpp"
#include "boundrat/harness.hpp"
#include "oracles.hpp"

using namespace boundrat;
using namespace boundrat::harness;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

void require(Outcome& o, bool cond, const std::string& what) {
    if (!cond) {
        o.pass = false;
        if (!o.detail.empty()) o.detail += "; ";
        o.detail += what;
    }
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::int64_t int_param(const ReportRow& row, std::size_t i) { return std::get<std::int64_t>(row.params[i]); }

int failures = 0;

void criterion(int n, const char* name, double limit_s, const std::function<Outcome()>& body) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= limit_s) require(o, false, "runtime over limit");
    if (!o.pass) ++failures;
    std::printf("criterion %2d: %s  %-28s %8.3f s (limit %g s)%s%s\n", n, o.pass ? "PASS" : "FAIL", name, secs,
                limit_s, o.detail.empty() ? "" : "  ", o.detail.c_str());
    std::fflush(stdout);
}

Outcome report_pass(const VerificationReport& r) {
    Outcome o;
    require(o, !r.rows.empty(), r.theorem_id + " produced no rows");
    for (const ReportRow& row : r.rows) require(o, row.pass, r.theorem_id + " row failed");
    require(o, r.pass, r.theorem_id + " failed");
    return o;
}

ExperimentConfig mc_config(const std::string& id) {
    ExperimentConfig c = default_config(id);
    c.seed = 20240611;
    return c;
}

}  // namespace

int main() {
    criterion(1, "optimizer deterioration", 1.0, [] {
        ExperimentConfig c = default_config("policy-mod");
        c.epsilons = {0.125};
        c.gammas = {0.5};
        c.t_min = 1;
        c.t_max = 12;
        VerificationReport r = verify_theorem("policy-mod", c);
        Outcome o = report_pass(r);
        require(o, r.rows.size() == 12, "expected 12 rows");
        for (const ReportRow& row : r.rows) {
            std::int64_t t = int_param(row, 2);
            ValueInterval gap{row.measured_lo, row.measured_hi};
            require(o, gap.width() <= 1e-6, "width at t=" + std::to_string(t));
            if (t == 3) require(o, gap.contains(0.5), "t=3 does not enclose 0.5");
            if (t >= 7) require(o, gap.contains(2.0), "t=" + std::to_string(t) + " does not enclose 2.0");
        }
        return o;
    });

    criterion(2, "recovery with exact agents", 1.0, [] {
        ExperimentConfig c = default_config("everitt-recovery");
        c.t_max = 10;
        return report_pass(verify_theorem("everitt-recovery", c));
    });

    criterion(3, "misaligned tightness", 1.0, [] {
        ExperimentConfig c = default_config("misaligned");
        c.epsilons = {0.05, 0.1, 0.25};
        c.gammas = {0.5, 0.9};
        VerificationReport r = verify_theorem("misaligned", c);
        Outcome o = report_pass(r);
        require(o, r.rows.size() == 6, "expected 6 rows");
        for (const ReportRow& row : r.rows) {
            double eps = std::get<double>(row.params[0]);
            double gamma = std::get<double>(row.params[1]);
            double f = f_util(eps, gamma);
            double slack = 1e-9 + (row.measured_hi - row.measured_lo);
            require(o, row.measured_lo <= f + slack && row.measured_hi >= f - slack,
                    "loss " + fmt("%.12g", row.measured_lo) + " vs " + fmt("%.12g", f));
        }
        return o;
    });

    criterion(4, "ignorant bounds", 10.0, [] {
        Outcome o = report_pass(verify_theorem("ignorant-abs", default_config("ignorant-abs")));
        Outcome rel = report_pass(verify_theorem("ignorant-rel", default_config("ignorant-rel")));
        require(o, rel.pass, rel.detail);
        ExperimentConfig c = default_config("ignorant-abs");
        c.construction = "ignorant-abs";
        c.epsilons = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
        c.gammas = {0.5, 0.9};
        for (const ReportRow& row : sweep(c).rows) {
            require(o, row.bound >= row.measured_lo - 1e-9, "f_bel below loss");
            require(o, row.bound <= (2.0 + 1e-6) * row.measured_hi, "abs ratio above 2");
        }
        c.construction = "ignorant-rel";
        for (const ReportRow& row : sweep(c).rows) {
            require(o, row.bound >= row.measured_lo - 1e-9, "rel f_bel below loss");
            require(o, row.bound <= (4.0 + 1e-6) * row.measured_hi, "rel ratio above 4");
        }
        return o;
    });

    criterion(5, "t-step TV growth", 30.0, [] {
        ExperimentConfig c = default_config("tv-growth");
        c.replicates = 20;
        c.t_max = 8;
        return report_pass(verify_theorem("tv-growth", c));
    });

    criterion(6, "impatient agents", 5.0, [] {
        ExperimentConfig c = default_config("impatient");
        VerificationReport r = verify_theorem("impatient", c);
        Outcome o = report_pass(r);
        require(o, r.rows.size() == 100, "expected a 10x10 grid");
        double spot = f_disc_exact(0.5, 0.9);
        // 0.9 / (1 - 0.9) rounds to 9 + 2 ulp, so "exactly 8" is taken at 1e-12.
        require(o, std::abs(spot - 8.0) <= 1e-12, "f_disc_exact(0.5, 0.9) = " + fmt("%.17g", spot));
        require(o, std::abs(f_disc_exact(0.95, 0.99) - oracle::discount_closed_form(0.95, 0.99)) <= 1e-6,
                "f_disc_exact(0.95, 0.99) off its closed form");
        for (const ReportRow& row : r.rows) {
            double g = std::get<double>(row.params[0]);
            double gs = std::get<double>(row.params[1]);
            if (g < 0.9) continue;
            double exact = f_disc_exact(g, gs);
            // On the diagonal both forms vanish.
            double err = std::abs(f_disc_approx(g, gs) - exact);
            require(o, err <= 0.02 * exact + 1e-9, "approximation off at " + fmt("%.4f", g) + "," + fmt("%.4f", gs));
        }
        return o;
    });

    criterion(7, "optimization-bound lemma", 60.0, [] {
        ExperimentConfig c = default_config("opt-lemma");
        c.replicates = 100;
        return report_pass(verify_theorem("opt-lemma", c));
    });

    std::string belief_csv, belief_jsonl, utility_csv, utility_jsonl;

    criterion(8, "average-case belief", 300.0, [&] {
        VerificationReport r = verify_theorem("avg-belief", mc_config("avg-belief"));
        belief_csv = emit_report(r, ReportFormat::csv);
        belief_jsonl = emit_report(r, ReportFormat::jsonl);
        Outcome o = report_pass(r);
        for (const ReportRow& row : r.rows)
            o.detail += (o.detail.empty() ? "" : ", ") + std::get<std::string>(row.params[0]) + " mean " +
                        fmt("%.4f", 0.5 * (row.measured_lo + row.measured_hi)) + " >= " + fmt("%.4f", row.bound);
        return o;
    });

    criterion(9, "random utility", 60.0, [&] {
        VerificationReport r = verify_theorem("avg-utility", mc_config("avg-utility"));
        utility_csv = emit_report(r, ReportFormat::csv);
        utility_jsonl = emit_report(r, ReportFormat::jsonl);
        Outcome o = report_pass(r);
        for (const ReportRow& row : r.rows)
            o.detail += (o.detail.empty() ? "" : ", ") + std::string("mean ") +
                        fmt("%.5f", 0.5 * (row.measured_lo + row.measured_hi)) + " vs " + fmt("%.5f", row.bound);
        return o;
    });

    criterion(10, "combined bound", 120.0, [] {
        return report_pass(verify_theorem("combining", default_config("combining")));
    });

    criterion(11, "determinism", 400.0, [&] {
        Outcome o;
        VerificationReport b = verify_theorem("avg-belief", mc_config("avg-belief"));
        VerificationReport u = verify_theorem("avg-utility", mc_config("avg-utility"));
        require(o, !belief_csv.empty() && !utility_csv.empty(), "criteria 8-9 did not produce reports");
        require(o, emit_report(b, ReportFormat::csv) == belief_csv, "avg-belief csv differs");
        require(o, emit_report(b, ReportFormat::jsonl) == belief_jsonl, "avg-belief jsonl differs");
        require(o, emit_report(u, ReportFormat::csv) == utility_csv, "avg-utility csv differs");
        require(o, emit_report(u, ReportFormat::jsonl) == utility_jsonl, "avg-utility jsonl differs");
        return o;
    });

    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
