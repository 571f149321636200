#include "symk/io_ledger.hpp"

#include <sstream>

namespace symk {

std::string IoReport::csv_header() {
  return "algo,N,M,S,loads_A,loads_C,stores,peak_resident";
}

std::string IoReport::csv_row(std::string_view algo, std::size_t n,
                              std::size_t m, std::size_t s) const {
  std::ostringstream out;
  out << algo << ',' << n << ',' << m << ',' << s << ',' << loads_a() << ','
      << loads_c() << ',' << stores << ',' << peak_resident;
  return out.str();
}

IoReport delta(const IoReport& end, const IoReport& start) {
  IoReport d;
  d.loads = end.loads - start.loads;
  d.stores = end.stores - start.stores;
  d.peak_resident = end.peak_resident;
  for (std::size_t i = 0; i < max_matrices; ++i)
    d.per_matrix_loads[i] = end.per_matrix_loads[i] - start.per_matrix_loads[i];
  return d;
}

void IoLedger::require_resident(std::span<const ElementAddr> addrs) const {
  for (const ElementAddr& a : addrs) {
    if (!resident(a))
      throw ResidencyError("operand not resident (matrix " +
                           std::to_string(a.matrix) + ", offset " +
                           std::to_string(a.offset) + ")");
  }
}

}  // namespace symk
