#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <thread>
#include <vector>

#include "bwstab/box.hpp"
#include "bwstab/errors.hpp"
#include "bwstab/interval.hpp"
#include "bwstab/lemma.hpp"

// Adaptive bisection verifier for the two Hessian certificate forms over
// (transformed parameter box) x (faces of Xi).
//
// The worklist is processed in breadth-first levels; inside a level, tasks
// are statically chunked across workers and every task of the level is
// always evaluated, so subsets_processed, max_depth_reached and the final
// status are identical for any worker count (only wall time changes).
//
// The Hessian enclosure depends only on the w-half of a task, so children of
// a v-split reuse their parent's matrix via shared ownership.

namespace bwstab {

enum class VerifyStatus { Verified, Failed, BudgetExceeded };

struct VerifyConfig {
    IneqForm form = IneqForm::Quadratic;
    int max_depth = 60;
    long long max_subsets = 1'000'000;
    int workers = 1;
    bool enhanced_hessian = true;
    int verbosity = 0;            // 1: per-level progress, 2: per-subset lines
    std::ostream* log = nullptr;  // required when verbosity > 0
};

struct VerifyTask {
    Box wbox;                      // subbox of the 5-dim transformed domain
    int face = 0;                  // Xi face with v_face = 1
    std::array<Interval, 3> vbox;  // the three free v coordinates
    int depth = 0;
};

struct VerifyReport {
    IneqForm form = IneqForm::Quadratic;
    VerifyStatus status = VerifyStatus::BudgetExceeded;
    long long subsets_processed = 0;
    int max_depth_reached = 0;
    double wall_time_seconds = 0.0;
    // On FAILED: subboxes where the certificate is provably negative, either
    // over the whole subbox or at its midpoint (a witness point).
    // On BUDGET_EXCEEDED: a snapshot of unresolved/unprocessed tasks.
    // Capped at kFrontierCap entries.
    std::vector<VerifyTask> frontier;

    static constexpr std::size_t kFrontierCap = 64;
};

namespace verify_detail {

struct Item {
    VerifyTask task;
    // Shared across v-splits of one wbox: the enclosure over the wbox and the
    // point Hessian at its midpoint (used only to steer splitting).
    std::shared_ptr<const MinorPair> h;
};

// Per-run memoization of the Hessian work by wbox. Sibling tasks with
// different v boxes routinely revisit the same wbox (v refinement happens
// before the w tree deepens), and the matrices are a pure function of the
// box, so sharing is free determinism-wise. Insertion stops at a size cap to
// bound memory on degenerate runs; lookups then fall through to recomputing.
class HessianCache {
  public:
    std::shared_ptr<const MinorPair> get(const Box& wbox) {
        std::lock_guard<std::mutex> lk(mu_);
        auto itr = map_.find(key(wbox));
        return itr == map_.end() ? nullptr : itr->second;
    }

    void put(const Box& wbox, std::shared_ptr<const MinorPair> p) {
        std::lock_guard<std::mutex> lk(mu_);
        if (map_.size() < kMaxEntries) map_.emplace(key(wbox), std::move(p));
    }

  private:
    static constexpr std::size_t kMaxEntries = 200'000;

    static std::array<double, 10> key(const Box& b) {
        std::array<double, 10> k{};
        for (int i = 0; i < 5; ++i) {
            k[2 * i] = b[i].lo;
            k[2 * i + 1] = b[i].hi;
        }
        return k;
    }

    std::map<std::array<double, 10>, std::shared_ptr<const MinorPair>> map_;
    std::mutex mu_;
};

enum class Kind { Passed, Violated, Split, Unresolved };

struct Outcome {
    Kind kind = Kind::Passed;
    Interval cert{};
    std::vector<Item> children;
};

// Split an interval at its midpoint with the same guards as Box bisection.
inline std::pair<Interval, Interval> split_interval(const Interval& d) {
    if (d.is_point()) throw InvariantViolation("split: interval has zero width");
    double m = d.mid();
    if (m <= d.lo) m = d.lo + 0.5 * (d.hi - d.lo);
    if (!(d.lo < m && m < d.hi)) throw InvariantViolation("split: no representable point");
    return {Interval(d.lo, m), Interval(m, d.hi)};
}

inline void process(const VerifyConfig& cfg, const std::array<double, 8>& init_width,
                    HessianCache& cache, Item& it, Outcome& out) {
    if (!it.h) {
        if (auto hit = cache.get(it.task.wbox)) {
            it.h = std::move(hit);
        } else {
            try {
                auto p = std::make_shared<const MinorPair>(
                    hessian_minor_pair(it.task.wbox, cfg.enhanced_hessian));
                cache.put(it.task.wbox, p);
                it.h = std::move(p);
            } catch (const DomainError&) {
                // f not evaluable over this subbox (degenerate-triangle region
                // of a custom domain); splitting may still isolate the bad part
                out.kind = Kind::Unresolved;
                out.cert = Interval(-1.0, 1.0);
            }
        }
    }

    Interval midc;
    bool have_midc = false;
    if (it.h) {
        out.cert = certificate_value(it.h->box, it.task.face, it.task.vbox, cfg.form);
        if (out.cert.lo >= 0.0) {
            out.kind = Kind::Passed;
            return;
        }
        out.kind = out.cert.hi < 0.0 ? Kind::Violated : Kind::Unresolved;
        if (out.kind == Kind::Violated) return;
        // Point-witness refutation: the midpoint matrix is a rigorous
        // enclosure of the Hessian at one y inside the subbox. If the
        // certificate is negative for every matrix it contains and every v in
        // the cell, that y violates the inequality; no amount of w
        // refinement can retract it. (The enclosure certificate above may
        // still straddle zero purely from matrix width.)
        midc = certificate_value(it.h->mid, it.task.face, it.task.vbox, cfg.form);
        have_midc = true;
        if (midc.hi < 0.0) {
            out.kind = Kind::Violated;
            out.cert = midc;
            return;
        }
    }

    // Inconclusive: split. The two halves of a task starve the certificate in
    // different ways and need very different resolutions, so a fixed
    // alternation wastes a doubling per wrong choice. The decision hinges on
    // the certificate at the point Hessian of the wbox midpoint (the witness
    // check above already ruled out mid hi < 0):
    //
    //   mid lo >= 0          w refinement alone will eventually flip the box,
    //                        and it benefits every v sibling through the
    //                        cache, so the w dimension widest relative to its
    //                        initial width goes first.
    //   mid lo < 0 <= mid hi the v box straddles the failure cone of even a
    //                        single contained matrix; matrix tightening can
    //                        never rescue it, so the widest v dimension goes.
    //
    // Exception: when one v split already makes both children pass under the
    // full enclosure (cheap to test, the matrix is reused), take it instead
    // of refining w further. Ties go to the lowest index everywhere. The
    // choice is a pure function of the task, so counts stay deterministic for
    // any worker count; it only affects counts, never soundness.
    if (it.task.depth >= cfg.max_depth) return;  // stays Unresolved

    const auto splittable = [](const Interval& d) {
        return !d.is_point() && d.lo < d.mid() && d.mid() < d.hi;
    };
    const auto widest_v = [&]() {
        int dim = -1;
        double w = 0.0;
        for (int k = 0; k < 3; ++k)
            if (splittable(it.task.vbox[k]) && it.task.vbox[k].width() > w) {
                w = it.task.vbox[k].width();
                dim = 5 + k;
            }
        return dim;
    };
    const auto widest_w = [&]() {
        int dim = -1;
        double rel = 0.0;
        for (int k = 0; k < 5; ++k) {
            if (!splittable(it.task.wbox[k]) || init_width[k] <= 0.0) continue;
            double r = it.task.wbox[k].width() / init_width[k];
            if (r > rel) {
                rel = r;
                dim = k;
            }
        }
        return dim;
    };

    int best = -1;
    if (it.h) {
        for (int k = 0; k < 3 && best < 0; ++k) {
            if (!splittable(it.task.vbox[k])) continue;
            auto halves = split_interval(it.task.vbox[k]);
            auto vb = it.task.vbox;
            vb[k] = halves.first;
            double la = certificate_value(it.h->box, it.task.face, vb, cfg.form).lo;
            vb[k] = halves.second;
            double lb = certificate_value(it.h->box, it.task.face, vb, cfg.form).lo;
            if (std::min(la, lb) >= 0.0) best = 5 + k;
        }
        if (best < 0 && have_midc && midc.lo < 0.0) best = widest_v();
    }
    // else: the Hessian was not evaluable, which depends on wbox alone

    if (best < 0) best = widest_w();
    if (best < 0) best = widest_v();
    if (best < 0) return;  // nothing splittable: stays Unresolved

    out.kind = Kind::Split;
    Item a = it, b = it;
    a.task.depth = b.task.depth = it.task.depth + 1;
    if (best < 5) {
        auto [lo, hi] = bisect(it.task.wbox, static_cast<std::size_t>(best));
        a.task.wbox = lo;
        b.task.wbox = hi;
        a.h.reset();  // Hessian depends on wbox
        b.h.reset();
    } else {
        auto [lo, hi] = split_interval(it.task.vbox[best - 5]);
        a.task.vbox[best - 5] = lo;
        b.task.vbox[best - 5] = hi;
    }
    out.children.push_back(std::move(a));
    out.children.push_back(std::move(b));
}

inline void log_task(std::ostream& os, const VerifyTask& t, const Outcome& o) {
    static const char* names[] = {"pass", "violated", "split", "unresolved"};
    os << "subset depth=" << t.depth << " face=" << t.face << " w=";
    for (int k = 0; k < 5; ++k) os << (k ? "x" : "") << t.wbox[k].width();
    os << " v=";
    for (int k = 0; k < 3; ++k) os << (k ? "x" : "") << t.vbox[k].width();
    os << " cert=[" << o.cert.lo << "," << o.cert.hi << "] " << names[static_cast<int>(o.kind)]
       << "\n";
}

}  // namespace verify_detail

// Run the adaptive certification over an explicit 5-dim domain (in the
// transformed y coordinates). The standard entry point seeds it with the
// lemma's box; custom domains are for negative controls and experiments.
inline VerifyReport verify_over(const Box& wdomain, const VerifyConfig& cfg) {
    using namespace verify_detail;
    if (wdomain.size() != 5) throw DomainError("verify_over expects a 5-dimensional domain");
    auto t0 = std::chrono::steady_clock::now();

    VerifyReport rep;
    rep.form = cfg.form;

    std::array<double, 8> init_width{};
    for (int k = 0; k < 5; ++k) init_width[k] = wdomain[k].width();
    for (int k = 5; k < 8; ++k) init_width[k] = 2.0;

    HessianCache cache;

    std::vector<Item> level;
    for (int face = 0; face < 4; ++face) {
        Item it;
        it.task.wbox = wdomain;
        it.task.face = face;
        it.task.vbox = {Interval(-1, 1), Interval(-1, 1), Interval(-1, 1)};
        level.push_back(std::move(it));
    }

    std::vector<VerifyTask> unresolved;
    bool capped = false;

    while (!level.empty()) {
        // budget cap, applied deterministically at task granularity
        std::size_t take = level.size();
        if (rep.subsets_processed + static_cast<long long>(take) > cfg.max_subsets) {
            take = static_cast<std::size_t>(
                std::max<long long>(0, cfg.max_subsets - rep.subsets_processed));
            capped = true;
        }

        std::vector<Outcome> outcomes(take);
        int workers = std::max(1, cfg.workers);
        if (workers == 1 || take < 2) {
            for (std::size_t i = 0; i < take; ++i) process(cfg, init_width, cache, level[i], outcomes[i]);
        } else {
            std::vector<std::thread> pool;
            std::size_t chunk = (take + workers - 1) / workers;
            for (int w = 0; w < workers; ++w) {
                std::size_t beg = w * chunk, end = std::min(take, beg + chunk);
                if (beg >= end) break;
                pool.emplace_back([&, beg, end] {
                    for (std::size_t i = beg; i < end; ++i)
                        process(cfg, init_width, cache, level[i], outcomes[i]);
                });
            }
            for (auto& th : pool) th.join();
        }

        rep.subsets_processed += static_cast<long long>(take);
        for (std::size_t i = 0; i < take; ++i)
            rep.max_depth_reached = std::max(rep.max_depth_reached, level[i].task.depth);

        if (cfg.verbosity >= 2 && cfg.log)
            for (std::size_t i = 0; i < take; ++i) log_task(*cfg.log, level[i].task, outcomes[i]);

        // definite violation wins over everything else; report in index order
        for (std::size_t i = 0; i < take; ++i) {
            if (outcomes[i].kind == Kind::Violated) {
                rep.status = VerifyStatus::Failed;
                for (std::size_t j = i; j < take && rep.frontier.size() < VerifyReport::kFrontierCap;
                     ++j)
                    if (outcomes[j].kind == Kind::Violated) rep.frontier.push_back(level[j].task);
                rep.wall_time_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                return rep;
            }
        }

        std::vector<Item> next;
        for (std::size_t i = 0; i < take; ++i) {
            switch (outcomes[i].kind) {
                case Kind::Split:
                    for (auto& c : outcomes[i].children) next.push_back(std::move(c));
                    break;
                case Kind::Unresolved:
                    unresolved.push_back(level[i].task);
                    break;
                default:
                    break;
            }
        }
        if (capped) {
            for (std::size_t i = take; i < level.size(); ++i) unresolved.push_back(level[i].task);
            for (auto& it : next) unresolved.push_back(it.task);
            break;
        }

        // Children beyond the remaining budget could never be processed, so
        // park them as unresolved now instead of letting a hopeless queue
        // outgrow memory before the per-level cap triggers.
        const long long room = cfg.max_subsets - rep.subsets_processed;
        if (static_cast<long long>(next.size()) > room) {
            const std::size_t keep = static_cast<std::size_t>(std::max<long long>(0, room));
            for (std::size_t i = keep; i < next.size(); ++i) unresolved.push_back(next[i].task);
            next.resize(keep);
        }

        if (cfg.verbosity >= 1 && cfg.log)
            *cfg.log << "level depth<=" << (next.empty() ? rep.max_depth_reached
                                                         : next.front().task.depth)
                     << ": processed=" << rep.subsets_processed << " queued=" << next.size()
                     << " unresolved=" << unresolved.size() << "\n";

        level = std::move(next);
    }

    rep.status = unresolved.empty() ? VerifyStatus::Verified : VerifyStatus::BudgetExceeded;
    for (const auto& t : unresolved) {
        if (rep.frontier.size() >= VerifyReport::kFrontierCap) break;
        rep.frontier.push_back(t);
    }
    rep.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

inline VerifyReport verify_lemma(const VerifyConfig& cfg = {}) {
    return verify_over(lemma_domain_transformed(), cfg);
}

}  // namespace bwstab
