#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <string>

// The "native" suite drives the real C toolchain; plain runs exclude it.
// `-ts=native` opts in, exiting 77 (the ctest skip code) when no compiler
// is on PATH.

static bool native_requested(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if ((a.rfind("-ts=", 0) == 0 || a.rfind("--test-suite=", 0) == 0) &&
            a.find("native") != std::string::npos)
            return true;
    }
    return false;
}

static bool have_c_compiler() {
    const char* cc = std::getenv("CC");
    std::string compiler = cc && *cc ? cc : "cc";
    return std::system((compiler + " --version >/dev/null 2>&1").c_str()) == 0;
}

int main(int argc, char** argv) {
    doctest::Context ctx;
    if (native_requested(argc, argv)) {
        if (!have_c_compiler()) {
            std::printf("no C compiler on PATH; skipping the native toolchain suite\n");
            return 77;
        }
    } else {
        ctx.addFilter("test-suite-exclude", "native");
    }
    ctx.applyCommandLine(argc, argv);
    return ctx.run();
}
