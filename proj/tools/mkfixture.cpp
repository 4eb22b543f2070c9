// Regenerates the bundled synthetic mini dataset (images, manifest, mock
// scenario table, recorded sidecars). The output is fully deterministic.

#include <cstdio>
#include <exception>

#include "fixtures.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: privar-mkfixture <output-dir>\n");
        return 2;
    }
    try {
        fixtures::generate_mini_dataset(argv[1]);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fixture generation failed: %s\n", e.what());
        return 1;
    }
    std::printf("mini dataset written to %s\n", argv[1]);
    return 0;
}
