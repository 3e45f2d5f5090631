#include <filesystem>
#include <iostream>

#include "slip/commands.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path scratch =
      argc > 1 ? std::filesystem::path(argv[1]) : std::filesystem::temp_directory_path() / "slipgait_acceptance";
  std::filesystem::remove_all(scratch);
  bool ok = true;
  for (const auto& r : slip::acceptance_suite(scratch)) {
    ok = ok && r.passed;
    std::cout << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail << std::endl;
  }
  return ok ? 0 : 1;
}
