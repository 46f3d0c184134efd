#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include "kolmonet/studies.hpp"

namespace kolmonet {

/// Minimal CSV writer. Reals are printed with 17 significant digits so
/// identical runs give identical files; non-finite values print as nan/inf.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  CsvWriter& cell(const std::string& v);
  CsvWriter& cell(double v);
  CsvWriter& cell(std::size_t v);
  CsvWriter& cell(bool v);
  void end_row();

 private:
  std::ostream& out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

std::string format_real(double v);

// Column sets: (N, M, estimate, std_error, bound) for convergence tables.
void write_moment_csv(std::ostream& out, const MomentStudy& s);
void write_weak_csv(std::ostream& out, const WeakStudy& s);
void write_strong_csv(std::ostream& out, const StrongMidpointResult& r);
void write_mc_lp_csv(std::ostream& out, const std::vector<McLpRow>& rows);
void write_calculus_csv(std::ostream& out, const CalculusStudy& s);
void write_bounds_csv(std::ostream& out, const std::vector<BoundsRow>& rows);
void write_verify_csv(std::ostream& out, const VerifyResult& r);

}  // namespace kolmonet
