#include "symk/lbc.hpp"

#include <cmath>
#include <stdexcept>

#include "symk/ooc.hpp"
#include "symk/tbs.hpp"

namespace symk {

std::size_t choose_block_size(std::size_t n) {
  if (n < 1) throw std::invalid_argument("choose_block_size: require n >= 1");
  auto b = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (b * b > n) --b;
  while ((b + 1) * (b + 1) <= n) ++b;
  return std::max<std::size_t>(1, b);
}

LbcResult lbc(const TriView& a, IoLedger& ledger,
              std::optional<std::size_t> block) {
  const std::size_t n = a.n;
  LbcResult result;
  result.block = block.value_or(choose_block_size(n));
  if (result.block < 1) throw std::invalid_argument("lbc: block must be >= 1");
  const std::size_t b = result.block;
  const IoReport start = ledger.snapshot();

  for (std::size_t i = 0; i * b < n; ++i) {
    LbcIteration iter;
    iter.index = i;
    iter.row0 = i * b;
    iter.block = std::min(b, n - i * b);
    iter.trailing = n - std::min(n, (i + 1) * b);

    const TriView diag = a.sub(iter.row0, iter.block);
    IoReport before = ledger.snapshot();
    ooc_chol(diag, ledger);
    iter.chol = delta(ledger.snapshot(), before);

    if (iter.trailing > 0) {
      const std::size_t panel_row0 = a.row0 + (i + 1) * b;
      const PanelView panel = packed_panel(a.data, a.id, panel_row0,
                                           a.row0 + iter.row0, iter.trailing,
                                           iter.block);
      before = ledger.snapshot();
      ooc_trsm(diag, panel, ledger);
      iter.trsm = delta(ledger.snapshot(), before);

      const TriView trailing = a.sub((i + 1) * b, iter.trailing);
      before = ledger.snapshot();
      tbs(panel, trailing, ledger, -1.0);
      iter.tbs = delta(ledger.snapshot(), before);
    }
    result.iterations.push_back(iter);
  }
  result.io = delta(ledger.snapshot(), start);
  return result;
}

double lbc_load_envelope(std::size_t n, std::uint64_t s, std::size_t b) {
  const double nn = static_cast<double>(n);
  const double bb = static_cast<double>(b);
  const double rs = std::sqrt(static_cast<double>(s));
  const double lg = std::log2(static_cast<double>(std::max<std::size_t>(n, 2)));
  return bb * bb * nn / (3.0 * rs) + bb * nn * nn / (2.0 * rs) +
         nn * nn * nn / (3.0 * std::sqrt(2.0) * rs) + nn * nn * nn / (6.0 * bb) +
         8.0 * nn * nn * lg;
}

}  // namespace symk
