#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include "pgroup/verify.hpp"

// one line per criterion; exit status 1 if any criterion fails
int main(int argc, char** argv) {
    pg::VerifyContext ctx;
    ctx.log = &std::cerr;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--quick") {
            ctx.sweep_primes = {3, 5};
            ctx.sweep_max_m = 7;
        } else if (a.rfind("--jobs=", 0) == 0) {
            ctx.jobs = std::atoi(a.c_str() + 7);
        } else {
            std::cerr << "usage: acceptance [--quick] [--jobs=N]\n";
            return 2;
        }
    }
    auto t0 = std::chrono::steady_clock::now();
    int failed = 0;
    pg::verify_all(ctx, [&](const pg::Criterion& c) {
        std::cout << pg::format_criterion(c) << "\n";
        for (const auto& n : c.notes) std::cout << "    " << n << "\n";
        std::cout.flush();
        failed += !c.pass;
    });
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (failed ? "FAILED " : "ALL PASSED ") << failed << " of 8 criteria failing, " << secs << " s\n";
    return failed ? 1 : 0;
}
