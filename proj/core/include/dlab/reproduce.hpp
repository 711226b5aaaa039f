#pragma once

#include "dlab/enttools.hpp"
#include "dlab/measure.hpp"

#include <iosfwd>

// The published-number regression suite behind `deficit-lab reproduce`.

namespace dlab::reproduce {

struct Row {
  std::string name;
  double reference = 0;   // the published value
  double computed = 0;
  double tolerance = 0;
  bool lower_bound_only = false;  // pass when computed >= reference - tolerance
  bool pass = false;
};

struct Erratum {
  std::string name;
  std::string printed_reading;
  std::string consistent_reading;
};

struct SuiteResult {
  std::vector<Row> rows;
  std::vector<Erratum> errata;
  bool all_pass() const;
};

SuiteResult run_paper_suite(const measure::OptimizerConfig& opt,
                            const enttools::ErConfig& er);

void print_table(std::ostream& os, const SuiteResult& result);

}  // namespace dlab::reproduce
