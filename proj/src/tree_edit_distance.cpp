// Zhang-Shasha ordered tree edit distance with unit costs.

#include <algorithm>
#include <vector>

#include "lamarck/genotype.hpp"

namespace lamarck {

namespace {

struct PostorderTree {
  std::vector<ModuleKind> label;  // 1-based postorder index
  std::vector<int> leftmost;      // leftmost leaf descendant, 1-based
  std::vector<int> keyroots;

  explicit PostorderTree(const ModuleNode& root) {
    label.push_back(ModuleKind::Head);
    leftmost.push_back(0);
    visit(root);
    const int n = size();
    // keyroots: the highest node for each distinct leftmost leaf
    std::vector<bool> seen(n + 1, false);
    for (int i = n; i >= 1; --i) {
      if (!seen[leftmost[i]]) {
        seen[leftmost[i]] = true;
        keyroots.push_back(i);
      }
    }
    std::sort(keyroots.begin(), keyroots.end());
  }

  int size() const { return static_cast<int>(label.size()) - 1; }

 private:
  int visit(const ModuleNode& n) {
    int first_leaf = -1;
    for (const auto& c : n.children) {
      const int lm = visit(c);
      if (first_leaf < 0) first_leaf = lm;
    }
    label.push_back(n.kind);
    const int self = size();
    leftmost.push_back(first_leaf < 0 ? self : first_leaf);
    return leftmost.back();
  }
};

}  // namespace

int tree_edit_distance(const Genotype& a, const Genotype& b) {
  const PostorderTree ta(a.root);
  const PostorderTree tb(b.root);
  const int n = ta.size();
  const int m = tb.size();

  std::vector<std::vector<int>> treedist(n + 1, std::vector<int>(m + 1, 0));
  std::vector<std::vector<int>> fd(n + 2, std::vector<int>(m + 2, 0));

  for (int i : ta.keyroots) {
    for (int j : tb.keyroots) {
      const int li = ta.leftmost[i];
      const int lj = tb.leftmost[j];
      // forest distance, shifted so that (li-1, lj-1) lands on (0, 0)
      auto F = [&](int x, int y) -> int& { return fd[x - li + 1][y - lj + 1]; };
      F(li - 1, lj - 1) = 0;
      for (int x = li; x <= i; ++x) F(x, lj - 1) = F(x - 1, lj - 1) + 1;
      for (int y = lj; y <= j; ++y) F(li - 1, y) = F(li - 1, y - 1) + 1;
      for (int x = li; x <= i; ++x) {
        for (int y = lj; y <= j; ++y) {
          const int del = F(x - 1, y) + 1;
          const int ins = F(x, y - 1) + 1;
          if (ta.leftmost[x] == li && tb.leftmost[y] == lj) {
            const int rel = F(x - 1, y - 1) + (ta.label[x] == tb.label[y] ? 0 : 1);
            F(x, y) = std::min({del, ins, rel});
            treedist[x][y] = F(x, y);
          } else {
            const int sub = F(ta.leftmost[x] - 1, tb.leftmost[y] - 1) + treedist[x][y];
            F(x, y) = std::min({del, ins, sub});
          }
        }
      }
    }
  }
  return treedist[n][m];
}

}  // namespace lamarck
