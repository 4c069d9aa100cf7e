#pragma once

// Maintenance window scheduling as a two-objective search: minimize
// cascade-weighted downtime and total cost. Candidate plans assign each
// work order a whole-hour start inside the horizon; orders on the same
// equipment must not overlap. The search is NSGA-II with single-point
// crossover over the slot-assignment vector and per-slot redraw mutation,
// fully determined by the seed.
//
// Objectives:
//   downtime = sum of outage hours x (1 + cascade-affected dependants)
//   cost     = sum of order costs, plus a penalty per hour started after
//              the order's latest acceptable start

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "assetgraph/error.hpp"

namespace assetgraph::analytics {

struct WorkOrder {
    std::string id;
    std::string equipment_id;
    double duration_hours = 0.0;
    double cost = 0.0;
    std::int64_t earliest_start = 0;    // hours from horizon start
    std::int64_t latest_start = 0;      // later starts incur the penalty
    std::size_t cascade_dependents = 0;
};

struct ScheduledOrder {
    std::string work_order_id;
    std::int64_t start_hour = 0;
};

struct MaintenancePlan {
    std::vector<ScheduledOrder> assignments;
    double downtime_hours = 0.0;
    double cost_units = 0.0;
    int rank = 0;
};

struct Nsga2Options {
    std::int64_t horizon_hours = 0;
    std::size_t population = 64;
    std::size_t generations = 100;
    std::uint64_t seed = 1;
    double lateness_penalty_per_hour = 1.0;
};

struct ScheduleResult {
    bool feasible = false;
    std::vector<MaintenancePlan> front;
};

namespace nsga_detail {

using Genome = std::vector<std::int64_t>;

struct Individual {
    Genome starts;
    double downtime = 0.0;
    double cost = 0.0;
    double violation = 0.0;    // total overlapping hours on shared equipment
    int rank = 0;
    double crowding = 0.0;
};

// a beats b when a is feasible and b is not, when both are infeasible and a
// violates less, or when both are feasible and a is no worse on both
// objectives and better on one
inline bool dominates(const Individual& a, const Individual& b) {
    const bool fa = a.violation == 0.0;
    const bool fb = b.violation == 0.0;
    if (fa != fb) return fa;
    if (!fa) return a.violation < b.violation;
    if (a.downtime > b.downtime || a.cost > b.cost) return false;
    return a.downtime < b.downtime || a.cost < b.cost;
}

} // namespace nsga_detail

inline ScheduleResult nsga2_schedule(const std::vector<WorkOrder>& orders,
                                     const Nsga2Options& opts) {
    using nsga_detail::Genome;
    using nsga_detail::Individual;

    if (opts.horizon_hours <= 0) throw ValidationError("schedule horizon must be positive");
    if (opts.population < 2) throw ValidationError("population must hold at least two plans");
    for (const auto& wo : orders) {
        if (wo.duration_hours <= 0.0)
            throw ValidationError("work order '" + wo.id + "' has non-positive duration");
        if (wo.earliest_start < 0)
            throw ValidationError("work order '" + wo.id + "' starts before the horizon");
    }

    ScheduleResult result;
    if (orders.empty()) {
        result.feasible = true;
        result.front.push_back(MaintenancePlan{});
        return result;
    }

    const std::size_t n = orders.size();
    std::vector<std::int64_t> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        lo[i] = orders[i].earliest_start;
        hi[i] = opts.horizon_hours -
                static_cast<std::int64_t>(std::ceil(orders[i].duration_hours));
        if (lo[i] > hi[i]) return result;    // no valid start slot
    }

    // exact feasibility: per equipment, packing in release order is optimal
    // for fitting everything before the horizon, so if that fails nothing fits
    std::map<std::string, std::vector<std::size_t>> by_equipment;
    for (std::size_t i = 0; i < n; ++i) by_equipment[orders[i].equipment_id].push_back(i);
    Genome packed(n);
    for (auto& [eq, idx] : by_equipment) {
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            if (orders[a].earliest_start != orders[b].earliest_start)
                return orders[a].earliest_start < orders[b].earliest_start;
            return a < b;
        });
        double prev_end = 0.0;
        for (std::size_t i : idx) {
            const std::int64_t start = std::max(
                orders[i].earliest_start, static_cast<std::int64_t>(std::ceil(prev_end)));
            if (start > hi[i]) return result;
            packed[i] = start;
            prev_end = static_cast<double>(start) + orders[i].duration_hours;
        }
    }
    result.feasible = true;

    auto evaluate = [&](Individual& ind) {
        ind.downtime = 0.0;
        ind.cost = 0.0;
        ind.violation = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ind.downtime += orders[i].duration_hours *
                            (1.0 + static_cast<double>(orders[i].cascade_dependents));
            ind.cost += orders[i].cost;
            const std::int64_t late = ind.starts[i] - orders[i].latest_start;
            if (late > 0)
                ind.cost += opts.lateness_penalty_per_hour * static_cast<double>(late);
        }
        for (const auto& [eq, idx] : by_equipment)
            for (std::size_t a = 0; a < idx.size(); ++a)
                for (std::size_t b = a + 1; b < idx.size(); ++b) {
                    const std::size_t i = idx[a], j = idx[b];
                    const double s1 = static_cast<double>(ind.starts[i]);
                    const double s2 = static_cast<double>(ind.starts[j]);
                    const double overlap =
                        std::min(s1 + orders[i].duration_hours, s2 + orders[j].duration_hours) -
                        std::max(s1, s2);
                    if (overlap > 0.0) ind.violation += overlap;
                }
    };

    std::mt19937_64 rng(opts.seed);
    auto random_start = [&](std::size_t i) {
        return std::uniform_int_distribution<std::int64_t>(lo[i], hi[i])(rng);
    };

    const std::size_t pop_size = opts.population;
    std::vector<Individual> pop(pop_size);
    pop[0].starts = packed;    // seed one known-feasible plan
    for (std::size_t p = 1; p < pop_size; ++p) {
        pop[p].starts.resize(n);
        for (std::size_t i = 0; i < n; ++i) pop[p].starts[i] = random_start(i);
    }
    for (auto& ind : pop) evaluate(ind);

    auto assign_ranks = [&](std::vector<Individual>& pool) {
        std::vector<std::vector<std::size_t>> dominated(pool.size());
        std::vector<std::size_t> dom_count(pool.size(), 0);
        std::vector<std::vector<std::size_t>> fronts(1);
        for (std::size_t a = 0; a < pool.size(); ++a)
            for (std::size_t b = 0; b < pool.size(); ++b) {
                if (a == b) continue;
                if (nsga_detail::dominates(pool[a], pool[b]))
                    dominated[a].push_back(b);
                else if (nsga_detail::dominates(pool[b], pool[a]))
                    ++dom_count[a];
            }
        for (std::size_t a = 0; a < pool.size(); ++a)
            if (dom_count[a] == 0) {
                pool[a].rank = 0;
                fronts[0].push_back(a);
            }
        std::size_t r = 0;
        while (!fronts[r].empty()) {
            std::vector<std::size_t> next;
            for (std::size_t a : fronts[r])
                for (std::size_t b : dominated[a])
                    if (--dom_count[b] == 0) {
                        pool[b].rank = static_cast<int>(r + 1);
                        next.push_back(b);
                    }
            fronts.push_back(std::move(next));
            ++r;
        }
        fronts.pop_back();
        return fronts;
    };

    auto assign_crowding = [&](std::vector<Individual>& pool,
                               const std::vector<std::size_t>& front) {
        for (std::size_t i : front) pool[i].crowding = 0.0;
        const double inf = std::numeric_limits<double>::infinity();
        for (int obj = 0; obj < 2; ++obj) {
            auto key = [&](std::size_t i) {
                return obj == 0 ? pool[i].downtime : pool[i].cost;
            };
            std::vector<std::size_t> order(front);
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
            const double span = key(order.back()) - key(order.front());
            pool[order.front()].crowding = inf;
            pool[order.back()].crowding = inf;
            if (span <= 0.0) continue;
            for (std::size_t k = 1; k + 1 < order.size(); ++k)
                pool[order[k]].crowding += (key(order[k + 1]) - key(order[k - 1])) / span;
        }
    };

    for (std::size_t gen = 0; gen < opts.generations; ++gen) {
        auto fronts = assign_ranks(pop);
        for (const auto& f : fronts) assign_crowding(pop, f);

        auto tournament = [&]() -> const Individual& {
            std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
            const std::size_t a = pick(rng), b = pick(rng);
            const Individual& x = pop[a];
            const Individual& y = pop[b];
            if (x.rank != y.rank) return x.rank < y.rank ? x : y;
            if (x.crowding != y.crowding) return x.crowding > y.crowding ? x : y;
            return x;
        };

        std::vector<Individual> offspring;
        offspring.reserve(pop_size);
        while (offspring.size() < pop_size) {
            Genome c1 = tournament().starts;
            Genome c2 = tournament().starts;
            if (n >= 2) {
                const std::size_t cut =
                    std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
                for (std::size_t i = cut; i < n; ++i) std::swap(c1[i], c2[i]);
            }
            for (Genome* g : {&c1, &c2}) {
                for (std::size_t i = 0; i < n; ++i)
                    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) <
                        1.0 / static_cast<double>(n))
                        (*g)[i] = random_start(i);
                Individual child;
                child.starts = *g;
                evaluate(child);
                if (offspring.size() < pop_size) offspring.push_back(std::move(child));
            }
        }

        // elitist merge: keep the best half of parents plus offspring
        std::vector<Individual> pool;
        pool.reserve(pop.size() + offspring.size());
        for (auto& ind : pop) pool.push_back(std::move(ind));
        for (auto& ind : offspring) pool.push_back(std::move(ind));
        auto pool_fronts = assign_ranks(pool);
        for (const auto& f : pool_fronts) assign_crowding(pool, f);

        std::vector<Individual> next;
        next.reserve(pop_size);
        for (const auto& f : pool_fronts) {
            if (next.size() + f.size() <= pop_size) {
                for (std::size_t i : f) next.push_back(pool[i]);
            } else {
                std::vector<std::size_t> order(f);
                std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                    return pool[a].crowding > pool[b].crowding;
                });
                for (std::size_t i : order) {
                    if (next.size() == pop_size) break;
                    next.push_back(pool[i]);
                }
            }
            if (next.size() == pop_size) break;
        }
        pop = std::move(next);
    }

    assign_ranks(pop);
    std::vector<const Individual*> winners;
    for (const auto& ind : pop)
        if (ind.rank == 0 && ind.violation == 0.0) winners.push_back(&ind);
    std::sort(winners.begin(), winners.end(), [](const Individual* a, const Individual* b) {
        if (a->downtime != b->downtime) return a->downtime < b->downtime;
        if (a->cost != b->cost) return a->cost < b->cost;
        return a->starts < b->starts;
    });
    winners.erase(std::unique(winners.begin(), winners.end(),
                              [](const Individual* a, const Individual* b) {
                                  return a->starts == b->starts;
                              }),
                  winners.end());

    for (const Individual* ind : winners) {
        MaintenancePlan plan;
        plan.downtime_hours = ind->downtime;
        plan.cost_units = ind->cost;
        plan.rank = 0;
        for (std::size_t i = 0; i < n; ++i)
            plan.assignments.push_back(ScheduledOrder{orders[i].id, ind->starts[i]});
        result.front.push_back(std::move(plan));
    }
    return result;
}

} // namespace assetgraph::analytics
