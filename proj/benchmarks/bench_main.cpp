#include "lure_eq/log.hpp"

#include <benchmark/benchmark.h>

int main(int argc, char** argv) {
    lure::log::set_level(lure::log::Level::Quiet);
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
