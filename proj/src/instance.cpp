#include "maxtsp/instance.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace maxtsp {

namespace {

constexpr std::string_view kMagic = "maxtsp";
constexpr int kFormatVersion = 1;

// Fixed-algorithm draws so generated bytes do not depend on the standard library.
class Draw {
 public:
  Draw(Family f, int n, std::uint64_t seed)
      : rng_(make_seq(f, n, seed)) {}

  Weight between(Weight lo, Weight hi) { return lo + static_cast<Weight>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool coin() { return (rng_() >> 63) != 0; }

  template <class T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[rng_() % i]);
  }

 private:
  static std::mt19937_64 make_seq(Family f, int n, std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(f)};
    return std::mt19937_64(seq);
  }

  std::mt19937_64 rng_;
};

class WeightTable {
 public:
  explicit WeightTable(int n) : n_(n), w_(static_cast<std::size_t>(n) * n, 0) {}
  void set(int u, int v, Weight w) { w_[static_cast<std::size_t>(u) * n_ + v] = w_[static_cast<std::size_t>(v) * n_ + u] = w; }
  Weight get(int u, int v) const { return w_[static_cast<std::size_t>(u) * n_ + v]; }
  CompleteGraph build() const {
    std::vector<Weight> upper;
    for (int u = 0; u < n_; ++u)
      for (int v = u + 1; v < n_; ++v) upper.push_back(get(u, v));
    return CompleteGraph(n_, upper);
  }

 private:
  int n_;
  std::vector<Weight> w_;
};

Weight ceil_sqrt(std::int64_t x) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(x)));
  while (r * r < x) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= x) --r;
  return r;
}

CompleteGraph uniform_random(int n, Draw& d) {
  WeightTable t(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) t.set(u, v, d.between(0, kMaxGeneratedWeight));
  return t.build();
}

// Rounding distances up keeps the triangle inequality; coordinates stay within a
// 700 square so every distance is at most 990.
CompleteGraph metric_euclidean(int n, Draw& d) {
  std::vector<std::pair<std::int64_t, std::int64_t>> pts(n);
  for (auto& p : pts) p = {d.between(0, 700), d.between(0, 700)};
  WeightTable t(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const auto dx = pts[u].first - pts[v].first;
      const auto dy = pts[u].second - pts[v].second;
      t.set(u, v, ceil_sqrt(dx * dx + dy * dy));
    }
  }
  return t.build();
}

// Splits 0..n-1 (shuffled) into groups of sizes 3 and 4 with an even number of triples.
std::vector<std::vector<int>> triple_square_groups(int n, Draw& d) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  d.shuffle(order);
  int squares = 0;
  int triples = 0;
  for (int s = n / 4; s >= 0; --s) {
    const int rest = n - 4 * s;
    if (rest % 3 == 0 && (rest / 3) % 2 == 0) {
      squares = s;
      triples = rest / 3;
      if (triples > 0 && squares > 0 && d.coin()) continue;
      break;
    }
  }
  std::vector<std::vector<int>> groups;
  std::size_t pos = 0;
  for (int i = 0; i < triples; ++i, pos += 3) groups.emplace_back(order.begin() + pos, order.begin() + pos + 3);
  for (int i = 0; i < squares; ++i, pos += 4) groups.emplace_back(order.begin() + pos, order.begin() + pos + 4);
  if (pos < order.size()) groups.emplace_back(order.begin() + pos, order.end());
  return groups;
}

// Heavy triangles and squares whose heaviest edges are matching candidates, with the
// free triangle corners paired by medium edges; everything else is light.
CompleteGraph kite_heavy(int n, Draw& d) {
  WeightTable t(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) t.set(u, v, d.between(0, 150));
  const auto groups = triple_square_groups(n, d);
  std::vector<int> feet;
  for (const auto& g : groups) {
    if (g.size() == 3) {
      t.set(g[0], g[1], d.between(900, 1000));
      t.set(g[1], g[2], d.between(700, 850));
      t.set(g[0], g[2], d.between(700, 850));
      feet.push_back(g[2]);
    } else if (g.size() == 4) {
      const bool diagonal = d.between(0, 3) == 0;
      for (int i = 0; i < 4; ++i) t.set(g[i], g[(i + 1) % 4], d.between(650, 800));
      t.set(g[0], g[2], d.between(200, 400));
      t.set(g[1], g[3], d.between(200, 400));
      if (diagonal) {
        t.set(g[0], g[2], d.between(900, 1000));
        t.set(g[1], g[3], d.between(900, 1000));
      } else {
        t.set(g[0], g[1], d.between(900, 1000));
        t.set(g[2], g[3], d.between(900, 1000));
      }
    } else {
      for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j) t.set(g[i], g[j], d.between(300, 600));
    }
  }
  for (std::size_t i = 0; i + 1 < feet.size(); i += 2) t.set(feet[i], feet[i + 1], d.between(400, 650));
  return t.build();
}

// Heavy even rings joined by a heavy cross matching, so the matching is mostly external
// and the rings see few colours.
CompleteGraph adversarial_alternating(int n, Draw& d) {
  WeightTable t(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) t.set(u, v, d.between(0, 300));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  d.shuffle(order);
  std::vector<std::vector<int>> rings;
  std::size_t pos = 0;
  while (pos < order.size()) {
    std::size_t len = static_cast<std::size_t>(2 * d.between(2, 4));
    if (order.size() - pos < len + 3) len = order.size() - pos;
    rings.emplace_back(order.begin() + pos, order.begin() + pos + len);
    pos += len;
  }
  for (const auto& r : rings) {
    if (r.size() < 3) continue;
    for (std::size_t i = 0; i < r.size(); ++i) t.set(r[i], r[(i + 1) % r.size()], d.between(850, 1000));
  }
  // Cross edges pair position i of each ring with position i of the next ring.
  for (std::size_t k = 0; k + 1 < rings.size(); k += 2) {
    const auto& a = rings[k];
    const auto& b = rings[k + 1];
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) t.set(a[i], b[i], d.between(800, 1000));
  }
  return t.build();
}

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::uniform_random:
      return "uniform_random";
    case Family::metric_euclidean:
      return "metric_euclidean";
    case Family::kite_heavy:
      return "kite_heavy";
    case Family::adversarial_alternating:
      return "adversarial_alternating";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (Family f : all_families())
    if (family_name(f) == name) return f;
  throw InstanceError("unknown family '" + std::string(name) + "'");
}

std::vector<Family> all_families() {
  return {Family::uniform_random, Family::metric_euclidean, Family::kite_heavy, Family::adversarial_alternating};
}

Instance generate_instance(Family family, int n, std::uint64_t seed) {
  if (n < 3) throw InstanceError("instance needs at least 3 vertices, got " + std::to_string(n));
  Draw d(family, n, seed);
  Instance inst;
  inst.seed = seed;
  inst.family = std::string(family_name(family));
  inst.name = inst.family + "-n" + std::to_string(n) + "-s" + std::to_string(seed);
  switch (family) {
    case Family::uniform_random:
      inst.graph = uniform_random(n, d);
      break;
    case Family::metric_euclidean:
      inst.graph = metric_euclidean(n, d);
      break;
    case Family::kite_heavy:
      inst.graph = kite_heavy(n, d);
      break;
    case Family::adversarial_alternating:
      inst.graph = adversarial_alternating(n, d);
      break;
  }
  return inst;
}

std::string format_instance(const CompleteGraph& g) {
  std::ostringstream out;
  out << kMagic << ' ' << kFormatVersion << '\n' << g.size() << '\n';
  const int n = g.size();
  for (int u = 0; u < n - 1; ++u) {
    for (int v = u + 1; v < n; ++v) out << (v > u + 1 ? " " : "") << g.weight(u, v);
    out << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::string_view> tokens(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

std::int64_t parse_int(std::string_view tok, const char* what) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw InstanceError(std::string("bad ") + what + " '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

CompleteGraph parse_instance(std::string_view text) {
  const auto nl = text.find('\n');
  const auto header = tokens(text.substr(0, nl));
  if (header.size() != 2 || header[0] != kMagic) throw InstanceError("missing 'maxtsp 1' header");
  if (parse_int(header[1], "version") != kFormatVersion) throw InstanceError("unsupported format version");
  if (nl == std::string_view::npos) throw InstanceError("missing vertex count");
  const auto body = tokens(text.substr(nl + 1));
  if (body.empty()) throw InstanceError("missing vertex count");
  const auto n = parse_int(body[0], "vertex count");
  if (n < 3 || n > 100000) throw InstanceError("vertex count out of range: " + std::to_string(n));
  std::vector<Weight> upper;
  upper.reserve(body.size() - 1);
  for (std::size_t i = 1; i < body.size(); ++i) upper.push_back(parse_int(body[i], "weight"));
  return CompleteGraph(static_cast<int>(n), upper);
}

CompleteGraph read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void write_instance_file(const std::string& path, const CompleteGraph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InstanceError("cannot write " + path);
  out << format_instance(g);
}

}  // namespace maxtsp
