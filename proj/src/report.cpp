#include "kolmonet/report.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace kolmonet {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header)
    : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

CsvWriter& CsvWriter::cell(const std::string& v) {
  if (filled_ == columns_) throw std::logic_error("too many CSV cells in row");
  out_ << (filled_++ ? "," : "");
  if (v.find_first_of(",\"\n") != std::string::npos) {
    out_ << '"';
    for (char c : v) out_ << (c == '"' ? "\"\"" : std::string(1, c));
    out_ << '"';
  } else {
    out_ << v;
  }
  return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_real(v)); }
CsvWriter& CsvWriter::cell(std::size_t v) { return cell(std::to_string(v)); }
CsvWriter& CsvWriter::cell(bool v) { return cell(std::string(v ? "pass" : "fail")); }

void CsvWriter::end_row() {
  if (filled_ != columns_) throw std::logic_error("incomplete CSV row");
  out_ << '\n';
  filled_ = 0;
}

void write_moment_csv(std::ostream& out, const MomentStudy& s) {
  CsvWriter w(out, {"problem", "d", "q", "N", "estimate", "std_error", "bound", "result"});
  for (const MomentRow& r : s.rows) {
    w.cell(r.problem).cell(r.d).cell(r.q).cell(r.step).cell(r.estimate).cell(r.std_error)
        .cell(r.bound).cell(r.pass);
    w.end_row();
  }
  w.cell(std::string("growth_g")).cell(std::size_t{0}).cell(0.0).cell(s.growth_checks)
      .cell(static_cast<double>(s.growth_violations)).cell(0.0).cell(0.0)
      .cell(s.growth_violations == 0);
  w.end_row();
}

void write_weak_csv(std::ostream& out, const WeakStudy& s) {
  CsvWriter w(out, {"N", "M", "estimate", "std_error", "bound", "result"});
  for (const WeakRow& r : s.rows) {
    w.cell(r.N).cell(std::string("")).cell(r.estimate).cell(r.std_error).cell(r.bound).cell(r.dominated);
    w.end_row();
  }
}

void write_strong_csv(std::ostream& out, const StrongMidpointResult& r) {
  CsvWriter w(out, {"N", "M", "estimate", "std_error", "bound", "result"});
  w.cell(r.steps).cell(r.paths).cell(r.rms).cell(r.std_error).cell(r.expected).cell(r.pass);
  w.end_row();
}

void write_mc_lp_csv(std::ostream& out, const std::vector<McLpRow>& rows) {
  CsvWriter w(out, {"N", "M", "estimate", "std_error", "bound", "result"});
  for (const McLpRow& r : rows) {
    w.cell(r.N).cell(r.M).cell(r.estimate).cell(r.std_error).cell(r.bound).cell(r.dominated);
    w.end_row();
  }
}

void write_calculus_csv(std::ostream& out, const CalculusStudy& s) {
  CsvWriter w(out, {"instances", "checks", "failures", "result"});
  w.cell(s.instances).cell(s.checks).cell(s.failures).cell(s.failures == 0);
  w.end_row();
}

void write_bounds_csv(std::ostream& out, const std::vector<BoundsRow>& rows) {
  CsvWriter w(out, {"bound_name", "eq_label", "inputs", "value", "empirical", "slack"});
  for (const BoundsRow& r : rows) {
    w.cell(r.bound).cell(r.label).cell(r.inputs).cell(r.value).cell(r.empirical).cell(r.slack);
    w.end_row();
  }
}

void write_verify_csv(std::ostream& out, const VerifyResult& r) {
  CsvWriter w(out, {"lp_error_vs_exact", "lp_error_vs_mc_average", "dnn_error_bound", "pass"});
  w.cell(r.lp_vs_exact).cell(r.lp_vs_mc_average).cell(r.dnn_error_bound).cell(r.pass);
  w.end_row();
}

}  // namespace kolmonet
