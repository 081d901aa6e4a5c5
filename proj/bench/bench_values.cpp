// Serial versus parallel per-player value computation on a few reference games.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "adm/buchi.hpp"
#include "adm/general.hpp"
#include "adm/generators.hpp"

#if defined(ADM_HAVE_OPENMP)
#include <omp.h>
#endif

using namespace adm;

namespace {

double best_of(int reps, const std::function<void()>& f) {
    double best = 1e300;
    for (int k = 0; k < reps; ++k) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

Game random_game(std::uint64_t seed, RandomObjective kind, std::size_t vertices, std::size_t players) {
    RandomSpec spec;
    spec.seed = seed;
    spec.vertices = vertices;
    spec.players = players;
    spec.objective = kind;
    return gen_random(spec);
}

}  // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::stoi(argv[1]) : 5;
    int threads = 1;
#if defined(ADM_HAVE_OPENMP)
    threads = omp_get_max_threads();
#endif
    std::printf("hardware threads %u, OpenMP threads %d\n", std::thread::hardware_concurrency(), threads);
    std::printf("%-28s %8s %12s %12s %8s\n", "game", "engine", "serial ms", "parallel ms", "speedup");

    struct Case {
        std::string name;
        Game game;
        bool buchi;
    };
    std::vector<Case> cases;
    cases.push_back({"metro(6,2)", gen_metro(6, 2), false});
    cases.push_back({"metro(6,2)", gen_metro(6, 2), true});
    cases.push_back({"metro(8,3)", gen_metro(8, 3), false});
    cases.push_back({"random parity 7v 4p", random_game(3, RandomObjective::Parity, 7, 4), false});
    cases.push_back({"random buchi 12v 4p", random_game(5, RandomObjective::Buchi, 12, 4), true});

    for (const auto& c : cases) {
        double serial = 0, parallel = 0;
        if (c.buchi) {
            BuchiOptions s, p;
            s.policy = ExecutionPolicy::Serial;
            p.policy = ExecutionPolicy::Parallel;
            serial = best_of(reps, [&] { run_buchi(c.game, s); });
            parallel = best_of(reps, [&] { run_buchi(c.game, p); });
        } else {
            GeneralOptions s, p;
            s.policy = ExecutionPolicy::Serial;
            p.policy = ExecutionPolicy::Parallel;
            serial = best_of(reps, [&] { run_to_fixpoint(c.game, s); });
            parallel = best_of(reps, [&] { run_to_fixpoint(c.game, p); });
        }
        std::printf("%-28s %8s %12.2f %12.2f %8.2f\n", c.name.c_str(), c.buchi ? "buchi" : "general", serial, parallel,
                    serial / parallel);
    }
    return 0;
}
