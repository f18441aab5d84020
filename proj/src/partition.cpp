#include "scatteq/partition.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <numeric>
#include <set>

#include "scatteq/errors.hpp"

namespace scatteq {

namespace {

constexpr int kMaxN = 12;

long long factorial(int k) {
  long long r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

void check_same_n(const Partition& a, const Partition& b) {
  if (a.n_particles() != b.n_particles())
    throw DomainError("partitions of different particle counts");
}

// DSU used by join.
struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<std::uint8_t> canonical_rgs_from_labels(const std::vector<int>& label) {
  // Labels are arbitrary ints (meet uses paired labels), so remap via a map.
  const int n = static_cast<int>(label.size());
  std::map<int, int> remap;
  std::vector<std::uint8_t> rgs(n);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    auto [it, fresh] = remap.try_emplace(label[i], next);
    if (fresh) ++next;
    rgs[i] = static_cast<std::uint8_t>(it->second);
  }
  return rgs;
}

}  // namespace

Partition::Partition(std::vector<std::uint8_t> rgs) : rgs_(std::move(rgs)) {
  const int n = static_cast<int>(rgs_.size());
  if (n < 1 || n > kMaxN) throw CapacityError("partition size outside 1..12");
  int max_seen = -1;
  for (int i = 0; i < n; ++i) {
    if (rgs_[i] > max_seen + 1)
      throw DomainError("not a restricted growth string");
    max_seen = std::max(max_seen, static_cast<int>(rgs_[i]));
  }
  n_blocks_ = max_seen + 1;
}

Partition Partition::one_cluster(int n) {
  if (n < 1 || n > kMaxN) throw CapacityError("partition size outside 1..12");
  return Partition(std::vector<std::uint8_t>(n, 0));
}

Partition Partition::n_cluster(int n) {
  if (n < 1 || n > kMaxN) throw CapacityError("partition size outside 1..12");
  std::vector<std::uint8_t> r(n);
  for (int i = 0; i < n; ++i) r[i] = static_cast<std::uint8_t>(i);
  return Partition(std::move(r));
}

Partition Partition::from_blocks(int n, const std::vector<std::vector<int>>& blocks) {
  if (n < 1 || n > kMaxN) throw CapacityError("partition size outside 1..12");
  std::vector<int> label(n, -1);
  int b = 0;
  for (const auto& blk : blocks) {
    if (blk.empty()) throw DomainError("empty block");
    for (int el : blk) {
      if (el < 1 || el > n) throw DomainError("label outside 1..n");
      if (label[el - 1] != -1) throw DomainError("duplicate label across blocks");
      label[el - 1] = b;
    }
    ++b;
  }
  for (int i = 0; i < n; ++i)
    if (label[i] < 0) throw DomainError("labels do not cover 1..n");
  return Partition(canonical_rgs_from_labels(label));
}

Partition Partition::parse(std::string_view text) {
  std::vector<std::vector<int>> blocks;
  std::size_t i = 0;
  int max_label = 0;
  bool has_comma = text.find(',') != std::string_view::npos;
  while (i < text.size()) {
    if (text[i] != '(') throw DomainError("expected '(' in partition string");
    ++i;
    std::vector<int> blk;
    while (i < text.size() && text[i] != ')') {
      if (text[i] == ',') {
        ++i;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[i])))
        throw DomainError("unexpected character in partition string");
      if (has_comma) {
        int v = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
          v = v * 10 + (text[i] - '0');
          ++i;
        }
        blk.push_back(v);
      } else {
        blk.push_back(text[i] - '0');
        ++i;
      }
    }
    if (i >= text.size()) throw DomainError("unterminated block");
    ++i;  // ')'
    if (blk.empty()) throw DomainError("empty block");
    for (int v : blk) max_label = std::max(max_label, v);
    blocks.push_back(std::move(blk));
  }
  if (blocks.empty()) throw DomainError("empty partition string");
  return from_blocks(max_label, blocks);
}

std::vector<std::vector<int>> Partition::blocks() const {
  std::vector<std::vector<int>> out(n_blocks_);
  for (int i = 0; i < n_particles(); ++i) out[rgs_[i]].push_back(i + 1);
  // RGS numbering is by first appearance, so blocks are already ordered by
  // least element and elements ascend.
  return out;
}

std::string Partition::str() const {
  const bool comma = n_particles() >= 10;
  std::string out;
  for (const auto& blk : blocks()) {
    out += '(';
    for (std::size_t j = 0; j < blk.size(); ++j) {
      if (comma && j) out += ',';
      out += std::to_string(blk[j]);
    }
    out += ')';
  }
  return out;
}

std::strong_ordering Partition::operator<=>(const Partition& o) const {
  if (auto c = n_particles() <=> o.n_particles(); c != 0) return c;
  for (int i = 0; i < n_particles(); ++i)
    if (auto c = rgs_[i] <=> o.rgs_[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

bool refines(const Partition& a, const Partition& b) {
  check_same_n(a, b);
  const int n = a.n_particles();
  // a refines b iff particles sharing an a-block share a b-block; since block
  // ids are by first appearance it suffices to map a-block -> b-block once.
  std::array<int, kMaxN> map{};
  map.fill(-1);
  for (int i = 0; i < n; ++i) {
    const int ab = a.rgs()[i], bb = b.rgs()[i];
    if (map[ab] < 0)
      map[ab] = bb;
    else if (map[ab] != bb)
      return false;
  }
  return true;
}

Partition join(const Partition& a, const Partition& b) {
  check_same_n(a, b);
  const int n = a.n_particles();
  Dsu dsu(n);
  std::array<int, kMaxN> first_a{}, first_b{};
  first_a.fill(-1);
  first_b.fill(-1);
  for (int i = 0; i < n; ++i) {
    if (int& f = first_a[a.rgs()[i]]; f < 0)
      f = i;
    else
      dsu.unite(f, i);
    if (int& f = first_b[b.rgs()[i]]; f < 0)
      f = i;
    else
      dsu.unite(f, i);
  }
  std::vector<int> label(n);
  for (int i = 0; i < n; ++i) label[i] = dsu.find(i);
  return Partition(canonical_rgs_from_labels(label));
}

Partition meet(const Partition& a, const Partition& b) {
  check_same_n(a, b);
  const int n = a.n_particles();
  std::vector<int> label(n);
  for (int i = 0; i < n; ++i)
    label[i] = a.rgs()[i] * kMaxN + b.rgs()[i];
  return Partition(canonical_rgs_from_labels(label));
}

int zeta(const Partition& a, const Partition& b) { return refines(b, a) ? 1 : 0; }

long long mobius(const Partition& a, const Partition& b) {
  check_same_n(a, b);
  if (!refines(b, a)) return 0;
  // n_i = number of b-blocks inside a-block i; every b-block sits wholly in
  // one a-block because b refines a.
  std::array<int, kMaxN> count{};
  count.fill(0);
  std::array<bool, kMaxN> seen{};
  seen.fill(false);
  for (int i = 0; i < a.n_particles(); ++i) {
    const int bb = b.rgs()[i];
    if (!seen[bb]) {
      seen[bb] = true;
      ++count[a.rgs()[i]];
    }
  }
  long long r = (a.n_clusters() % 2 == 0) ? 1 : -1;
  for (int i = 0; i < a.n_clusters(); ++i) {
    r *= factorial(count[i] - 1);
    if (count[i] % 2 != 0) r = -r;
  }
  return r;
}

long long cluster_coefficient(const Partition& a) {
  const long long f = factorial(a.n_clusters() - 1);
  return (a.n_clusters() % 2 == 0) ? f : -f;
}

std::vector<Partition> enumerate_partitions(int n) {
  if (n < 1 || n > kMaxN) throw CapacityError("enumeration supports 1 <= n <= 12");
  std::vector<Partition> out;
  out.reserve(static_cast<std::size_t>(bell_number(n)));
  std::vector<std::uint8_t> rgs(n, 0), maxv(n, 0);
  for (;;) {
    out.emplace_back(rgs);
    // next restricted growth string in lexicographic order
    int i = n - 1;
    for (; i > 0; --i) {
      if (rgs[i] <= maxv[i - 1]) break;
    }
    if (i == 0) break;
    ++rgs[i];
    maxv[i] = std::max(maxv[i - 1], rgs[i]);
    for (int j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      maxv[j] = maxv[i];
    }
  }
  return out;
}

long long bell_number(int n) {
  if (n < 0 || n > kMaxN) throw CapacityError("Bell numbers supported for 0 <= n <= 12");
  // Bell triangle.
  std::vector<long long> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<long long> next{row.back()};
    for (long long v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

LatticeTable::LatticeTable(int n) : n_(n), parts_(enumerate_partitions(n)) {
  coeff_.reserve(parts_.size());
  for (const auto& p : parts_) coeff_.push_back(cluster_coefficient(p));
}

int LatticeTable::index_of(const Partition& p) const {
  if (p.n_particles() != n_) throw DomainError("partition of wrong particle count");
  auto it = std::lower_bound(parts_.begin(), parts_.end(), p);
  return static_cast<int>(it - parts_.begin());
}

bool LatticeTable::leq(int a_idx, int b_idx) const {
  return refines(parts_[a_idx], parts_[b_idx]);
}

long long LatticeTable::mobius(int a_idx, int b_idx) const {
  auto key = std::make_pair(a_idx, b_idx);
  if (auto it = mobius_cache_.find(key); it != mobius_cache_.end()) return it->second;
  long long v = scatteq::mobius(parts_[a_idx], parts_[b_idx]);
  mobius_cache_.emplace(key, v);
  return v;
}

}  // namespace scatteq
