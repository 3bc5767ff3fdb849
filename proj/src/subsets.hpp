#pragma once

#include <vector>

namespace ssobs::detail {

// Enumerates k-subsets of {0..p-1} in lexicographic order; visit returns
// false to abort the scan. Returns true when the scan ran to completion.
template <typename Visit>
bool for_each_subset(int p, int k, Visit visit) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k == 0) return visit(idx);
  if (k > p) return true;
  while (true) {
    if (!visit(idx)) return false;
    int i = k - 1;
    while (i >= 0 && idx[i] == p - k + i) --i;
    if (i < 0) return true;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace ssobs::detail
