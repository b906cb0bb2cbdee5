#pragma once
#include <chrono>
#include <ctime>

namespace deckopt {

struct TimeSample {
    double wall_seconds = 0.0;
    double cpu_seconds = 0.0; // process CPU time, summed across threads
};

inline double process_cpu_seconds() {
    timespec ts{};
    clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
    return static_cast<double>(ts.tv_sec) + static_cast<double>(ts.tv_nsec) * 1e-9;
}

class StopWatch {
public:
    StopWatch() { restart(); }

    void restart() {
        wall_start_ = std::chrono::steady_clock::now();
        cpu_start_ = process_cpu_seconds();
    }

    TimeSample elapsed() const {
        TimeSample t;
        t.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start_)
                .count();
        t.cpu_seconds = process_cpu_seconds() - cpu_start_;
        return t;
    }

private:
    std::chrono::steady_clock::time_point wall_start_;
    double cpu_start_ = 0.0;
};

/// Runs fn and reports wall and CPU time spent in it.
template <class Fn> TimeSample time_call(Fn&& fn) {
    StopWatch watch;
    fn();
    return watch.elapsed();
}

} // namespace deckopt
