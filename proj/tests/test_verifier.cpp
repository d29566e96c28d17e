// Tests for the adaptive bisection verifier: full certification of both
// inequality forms over the lemma domain, determinism across worker counts,
// violation detection on a box where the Hessian loses the eigenvalue bound,
// and budget/depth exhaustion reporting.

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <sstream>

#include "bwstab/lemma.hpp"
#include "bwstab/verifier.hpp"

using bwstab::Box;
using bwstab::certificate_value;
using bwstab::IneqForm;
using bwstab::Interval;
using bwstab::VerifyConfig;
using bwstab::VerifyReport;
using bwstab::VerifyStatus;

namespace {

// A subbox of the lemma domain around its anchor-side corner: small enough to
// certify in a handful of subsets, so determinism runs stay cheap.
Box easy_domain() {
    return Box({Interval(2.0, 2.01), Interval(2.0, 2.01), Interval(-0.01, 0.01),
                Interval(-0.01, 0.01), Interval(0.0, 0.02)});
}

// Around y = (2.8407, 2.8407, 0.2713, 0.2713, 0.6587) the minor of the
// transformed Hessian has an eigenvalue near -1. An eigenvalue inside (-2, 2)
// violates both certificate forms: the quadratic one because lambda_min < 2,
// the norm one because |lambda| < 2.
Box violated_domain() {
    auto at = [](double c) { return Interval(c - 0.01, c + 0.01); };
    return Box({at(2.8407), at(2.8407), at(0.2713), at(0.2713), at(0.6587)});
}

// Around y = (3.2, 3.2, 0.4, 0.4, 0.9) the eigenvalue is near -15: strongly
// indefinite, so the quadratic form fails, while the norm form (which only
// needs |lambda| >= 2) is not refuted there.
Box indefinite_domain() {
    auto at = [](double c) { return Interval(c - 0.1, c + 0.1); };
    return Box({at(3.2), at(3.2), at(0.4), at(0.4), at(0.9)});
}

bool same_task(const bwstab::VerifyTask& a, const bwstab::VerifyTask& b) {
    if (a.face != b.face || a.depth != b.depth) return false;
    for (int k = 0; k < 5; ++k)
        if (a.wbox[k].lo != b.wbox[k].lo || a.wbox[k].hi != b.wbox[k].hi) return false;
    for (int k = 0; k < 3; ++k)
        if (a.vbox[k].lo != b.vbox[k].lo || a.vbox[k].hi != b.vbox[k].hi) return false;
    return true;
}

}  // namespace

TEST_CASE("both certificate forms verify over the full lemma domain") {
    for (IneqForm form : {IneqForm::Quadratic, IneqForm::Norm}) {
        VerifyConfig cfg;
        cfg.form = form;
        cfg.max_subsets = 1'000'000;
        VerifyReport rep = bwstab::verify_lemma(cfg);

        INFO("form=" << (form == IneqForm::Quadratic ? "quadratic" : "norm")
                     << " subsets=" << rep.subsets_processed
                     << " depth=" << rep.max_depth_reached);
        CHECK(rep.status == VerifyStatus::Verified);
        CHECK(rep.frontier.empty());
        // sanity band: the run is nontrivial but nowhere near the budget
        CHECK(rep.subsets_processed > 1000);
        CHECK(rep.subsets_processed < 100'000);
        CHECK(rep.max_depth_reached < 30);
        CHECK(rep.form == form);
    }
}

TEST_CASE("report counts are identical for any worker count") {
    for (IneqForm form : {IneqForm::Quadratic, IneqForm::Norm}) {
        VerifyConfig one;
        one.form = form;
        one.workers = 1;
        VerifyConfig four = one;
        four.workers = 4;

        VerifyReport a = bwstab::verify_over(easy_domain(), one);
        VerifyReport b = bwstab::verify_over(easy_domain(), four);

        CHECK(a.status == VerifyStatus::Verified);
        CHECK(a.status == b.status);
        CHECK(a.subsets_processed == b.subsets_processed);
        CHECK(a.max_depth_reached == b.max_depth_reached);
        REQUIRE(a.frontier.size() == b.frontier.size());
        for (std::size_t i = 0; i < a.frontier.size(); ++i)
            CHECK(same_task(a.frontier[i], b.frontier[i]));
    }
}

TEST_CASE("a domain with a negative certificate is reported as failed") {
    for (int workers : {1, 2}) {
        VerifyConfig cfg;
        cfg.form = IneqForm::Quadratic;
        cfg.workers = workers;
        VerifyReport rep = bwstab::verify_over(violated_domain(), cfg);

        CHECK(rep.status == VerifyStatus::Failed);
        REQUIRE_FALSE(rep.frontier.empty());
        // every reported subbox must independently re-certify as violated,
        // either over the whole subbox or at its midpoint witness
        for (const auto& t : rep.frontier) {
            auto pair = bwstab::hessian_minor_pair(t.wbox);
            Interval over = certificate_value(pair.box, t.face, t.vbox, cfg.form);
            Interval at_mid = certificate_value(pair.mid, t.face, t.vbox, cfg.form);
            CHECK((over.hi < 0.0 || at_mid.hi < 0.0));
        }
    }
}

TEST_CASE("norm form also detects the violation") {
    VerifyConfig cfg;
    cfg.form = IneqForm::Norm;
    VerifyReport rep = bwstab::verify_over(violated_domain(), cfg);
    CHECK(rep.status == VerifyStatus::Failed);
    CHECK_FALSE(rep.frontier.empty());
}

TEST_CASE("a strongly indefinite Hessian refutes the quadratic form") {
    VerifyConfig cfg;
    cfg.form = IneqForm::Quadratic;
    VerifyReport rep = bwstab::verify_over(indefinite_domain(), cfg);
    CHECK(rep.status == VerifyStatus::Failed);
    CHECK_FALSE(rep.frontier.empty());
}

TEST_CASE("subset budget exhaustion is reported, not silently truncated") {
    VerifyConfig cfg;
    cfg.max_subsets = 3;  // below even the four seed faces
    VerifyReport rep = bwstab::verify_lemma(cfg);
    CHECK(rep.status == VerifyStatus::BudgetExceeded);
    CHECK(rep.subsets_processed == 3);
    CHECK_FALSE(rep.frontier.empty());
}

TEST_CASE("depth limit leaves the seed faces unresolved") {
    VerifyConfig cfg;
    cfg.max_depth = 0;
    VerifyReport rep = bwstab::verify_lemma(cfg);
    CHECK(rep.status == VerifyStatus::BudgetExceeded);
    CHECK(rep.subsets_processed == 4);
    CHECK(rep.frontier.size() == 4);  // one unresolved task per face
}

TEST_CASE("level log reports monotone progress") {
    std::ostringstream log;
    VerifyConfig cfg;
    cfg.verbosity = 1;
    cfg.log = &log;
    VerifyReport rep = bwstab::verify_over(easy_domain(), cfg);
    CHECK(rep.status == VerifyStatus::Verified);
    CHECK(log.str().find("processed=") != std::string::npos);
}
