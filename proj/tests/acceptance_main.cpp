// Acceptance gate: runs every criterion at its pinned tolerance and prints
// one pass/fail line per criterion. Exits nonzero if any criterion fails.
#include <filesystem>
#include <iostream>

#include "qmem/config.hpp"
#include "qmem/validation.hpp"

int main() {
    const std::filesystem::path scratch =
        std::filesystem::current_path() / "acceptance_scratch";
    const qmem::FlatConfig preset;  // pure realistic preset, no overrides
    const qmem::ValidationReport report = qmem::run_acceptance_suite(preset, scratch);
    qmem::print_report(std::cout, report);
    return report.all_passed() ? 0 : 1;
}
