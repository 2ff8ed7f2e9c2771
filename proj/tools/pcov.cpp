// pcov: coverage-probability sweeps to CSV.
//
// Exit codes: 0 success, 2 usage error, 3 numerical failure, 1 I/O failure.

#include <exception>
#include <iostream>

#include "pcov/errors.hpp"
#include "pcov/sweep.hpp"

int main(int argc, char** argv) {
  pcov::SweepSpec spec;
  try {
    spec = pcov::parse_args(argc, argv);
  } catch (const pcov::HelpRequested& help) {
    std::cout << help.what();
    return 0;
  } catch (const pcov::UsageError& e) {
    std::cerr << "pcov: usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    const auto curves = pcov::run_sweep(spec, &std::cerr);
    pcov::write_csv(curves, spec.output_path);
  } catch (const pcov::NumericalError& e) {
    std::cerr << "pcov: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "pcov: usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "pcov: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
