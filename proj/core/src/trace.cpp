#include "randopt/trace.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace randopt {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace {

void put(std::ostream& out, const std::optional<double>& v) {
  if (v) out << format_number(*v);
}

void put(std::ostream& out, const std::optional<bool>& v) {
  if (v) out << (*v ? '1' : '0');
}

}  // namespace

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << kTraceCsvHeader << '\n';
  for (const auto& r : trace.records) {
    out << r.k << ',' << format_number(r.alpha) << ',';
    put(out, r.sigma);
    out << ',' << format_number(r.f) << ',' << format_number(r.grad_norm) << ',';
    put(out, r.step_norm);
    out << ',';
    put(out, r.is_shrink ? std::optional<bool>{} : r.is_true);
    out << ',' << (r.is_successful ? '1' : '0') << ',';
    put(out, r.xi);
    out << ',';
    put(out, r.rho);
    out << '\n';
  }
}

}  // namespace randopt
