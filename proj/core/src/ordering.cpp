#include "spx/ordering.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace spx {

namespace {

/// Flood-fill labeling over a reusable visit buffer.
class ComponentScanner {
 public:
  std::vector<std::size_t> scan(const BinaryGrid& cells,
                                Connectivity connectivity, Color color) {
    const std::size_t rows = cells.rows();
    const std::size_t cols = cells.cols();
    visited_.assign(rows * cols, 0);
    std::vector<std::size_t> sizes;
    const std::uint8_t want = color == Color::white ? 1 : 0;
    const auto values = cells.values();
    const bool diagonal = connectivity == Connectivity::eight;

    for (std::size_t start = 0; start < values.size(); ++start) {
      if (visited_[start] || (values[start] != 0) != (want != 0)) {
        continue;
      }
      std::size_t count = 0;
      stack_.clear();
      stack_.push_back(start);
      visited_[start] = 1;
      while (!stack_.empty()) {
        const std::size_t at = stack_.back();
        stack_.pop_back();
        ++count;
        const std::ptrdiff_t r = static_cast<std::ptrdiff_t>(at / cols);
        const std::ptrdiff_t c = static_cast<std::ptrdiff_t>(at % cols);
        for (std::ptrdiff_t dr = -1; dr <= 1; ++dr) {
          for (std::ptrdiff_t dc = -1; dc <= 1; ++dc) {
            if ((dr == 0 && dc == 0) || (!diagonal && dr != 0 && dc != 0)) {
              continue;
            }
            const std::ptrdiff_t nr = r + dr;
            const std::ptrdiff_t nc = c + dc;
            if (nr < 0 || nc < 0 || nr >= static_cast<std::ptrdiff_t>(rows) ||
                nc >= static_cast<std::ptrdiff_t>(cols)) {
              continue;
            }
            const std::size_t next = static_cast<std::size_t>(nr) * cols +
                                     static_cast<std::size_t>(nc);
            if (!visited_[next] && (values[next] != 0) == (want != 0)) {
              visited_[next] = 1;
              stack_.push_back(next);
            }
          }
        }
      }
      sizes.push_back(count);
    }
    return sizes;
  }

 private:
  std::vector<std::uint8_t> visited_;
  std::vector<std::size_t> stack_;
};

RegionStat stat_for(const Pattern& p, Connectivity connectivity,
                    ComponentScanner& scanner) {
  const BinaryGrid grid = p.to_grid();
  const auto white = scanner.scan(grid, connectivity, Color::white);
  // The baseline always counts regions under 4-connectivity.
  const auto white4 = connectivity == Connectivity::four
                          ? white
                          : scanner.scan(grid, Connectivity::four, Color::white);
  const auto black4 = scanner.scan(grid, Connectivity::four, Color::black);
  RegionStat s;
  s.pattern_index = p.index();
  s.max_white_area =
      white.empty() ? 0 : *std::max_element(white.begin(), white.end());
  s.region_count = white4.size() + black4.size();
  return s;
}

void check_side(std::size_t n, std::size_t max_side) {
  exact_log2(n);
  if (n > max_side) {
    throw ConfigError("ordering side " + std::to_string(n) +
                      " exceeds the configured limit " +
                      std::to_string(max_side));
  }
}

// Fisher-Yates over mt19937_64 with rejection sampling; the standard fixes
// mt19937_64's output, so the shuffle is identical on every platform.
std::vector<std::size_t> seeded_shuffle(std::size_t size, std::uint64_t seed) {
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 engine(seed);
  for (std::size_t i = size; i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw = engine();
    while (draw >= limit) {
      draw = engine();
    }
    std::swap(order[i - 1], order[draw % bound]);
  }
  return order;
}

}  // namespace

std::vector<std::size_t> connected_components(const BinaryGrid& cells,
                                              Connectivity connectivity,
                                              Color color) {
  if (cells.empty()) {
    throw SizeError("connected_components: empty grid");
  }
  ComponentScanner scanner;
  return scanner.scan(cells, connectivity, color);
}

RegionStat max_effective_area(const Pattern& p, Connectivity connectivity) {
  if (p.polarity() != Polarity::positive) {
    throw UsageError("max_effective_area expects a positive-polarity pattern");
  }
  ComponentScanner scanner;
  return stat_for(p, connectivity, scanner);
}

std::vector<RegionStat> region_stats(std::size_t n, Connectivity connectivity,
                                     unsigned workers) {
  exact_log2(n);
  const std::size_t total = n * n;
  std::vector<RegionStat> stats(total);
  const unsigned threads =
      std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(total)));

  auto run = [&](std::size_t begin, std::size_t end) {
    ComponentScanner scanner;
    for (std::size_t k = begin; k < end; ++k) {
      stats[k] = stat_for(pattern_from_row(n, k), connectivity, scanner);
    }
  };

  if (threads == 1) {
    run(0, total);
    return stats;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (total + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(total, t * chunk);
    const std::size_t end = std::min(total, begin + chunk);
    pool.emplace_back(run, begin, end);
  }
  pool.clear();
  return stats;
}

std::string OrderingMethod::to_string() const {
  switch (kind) {
    case OrderKind::eahsi:
      return "eahsi";
    case OrderKind::natural:
      return "natural";
    case OrderKind::random:
      return "random(seed=" + std::to_string(seed) + ")";
    case OrderKind::region_count_baseline:
      return "region_count_baseline";
  }
  return "unknown";
}

OrderingMethod OrderingMethod::parse(std::string_view text) {
  auto parse_seed = [&](std::string_view digits) {
    std::uint64_t value = 0;
    const auto* end = digits.data() + digits.size();
    auto [ptr, ec] = std::from_chars(digits.data(), end, value);
    if (digits.empty() || ec != std::errc{} || ptr != end) {
      throw ConfigError("invalid random seed in ordering method '" +
                        std::string(text) + "'");
    }
    return value;
  };

  if (text == "eahsi") return {OrderKind::eahsi, 0};
  if (text == "natural") return {OrderKind::natural, 0};
  if (text == "region_count_baseline") {
    return {OrderKind::region_count_baseline, 0};
  }
  if (text == "random") return {OrderKind::random, 0};
  constexpr std::string_view paren = "random(seed=";
  if (text.starts_with(paren) && text.ends_with(")")) {
    return {OrderKind::random,
            parse_seed(text.substr(paren.size(),
                                   text.size() - paren.size() - 1))};
  }
  constexpr std::string_view colon = "random:";
  if (text.starts_with(colon)) {
    return {OrderKind::random, parse_seed(text.substr(colon.size()))};
  }
  throw ConfigError("unknown ordering method '" + std::string(text) + "'");
}

OrderedSequence eahsi_order(std::size_t n, Connectivity connectivity,
                            unsigned workers, std::size_t max_side) {
  check_side(n, max_side);
  const auto stats = region_stats(n, connectivity, workers);
  OrderedSequence seq{n, {OrderKind::eahsi, 0}, connectivity, {}};
  seq.order.resize(stats.size());
  std::iota(seq.order.begin(), seq.order.end(), std::size_t{0});
  std::stable_sort(seq.order.begin(), seq.order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return stats[a].max_white_area > stats[b].max_white_area;
                   });
  return seq;
}

OrderedSequence baseline_order(std::size_t n, OrderingMethod method,
                               unsigned workers, std::size_t max_side) {
  check_side(n, max_side);
  OrderedSequence seq{n, method, Connectivity::four, {}};
  switch (method.kind) {
    case OrderKind::natural:
      seq.order.resize(n * n);
      std::iota(seq.order.begin(), seq.order.end(), std::size_t{0});
      break;
    case OrderKind::random:
      seq.order = seeded_shuffle(n * n, method.seed);
      break;
    case OrderKind::region_count_baseline: {
      const auto stats = region_stats(n, Connectivity::four, workers);
      seq.order.resize(stats.size());
      std::iota(seq.order.begin(), seq.order.end(), std::size_t{0});
      std::stable_sort(seq.order.begin(), seq.order.end(),
                       [&](std::size_t a, std::size_t b) {
                         return stats[a].region_count < stats[b].region_count;
                       });
      break;
    }
    case OrderKind::eahsi:
      throw ConfigError("baseline_order does not produce eahsi orderings");
  }
  return seq;
}

OrderedSequence make_order(std::size_t n, OrderingMethod method,
                           Connectivity connectivity, unsigned workers,
                           std::size_t max_side) {
  if (method.kind == OrderKind::eahsi) {
    return eahsi_order(n, connectivity, workers, max_side);
  }
  return baseline_order(n, method, workers, max_side);
}

bool is_permutation_of_range(const std::vector<std::size_t>& order,
                             std::size_t size) {
  if (order.size() != size) {
    return false;
  }
  std::vector<bool> seen(size, false);
  for (auto k : order) {
    if (k >= size || seen[k]) {
      return false;
    }
    seen[k] = true;
  }
  return true;
}

std::string format_ordering(const OrderedSequence& seq) {
  std::string out = "# spx-order v1 n=" + std::to_string(seq.n) +
                    " method=" + seq.method.to_string() + " connectivity=" +
                    std::to_string(static_cast<int>(seq.connectivity)) + "\n";
  out.reserve(out.size() + seq.order.size() * 6);
  for (auto k : seq.order) {
    out += std::to_string(k);
    out += '\n';
  }
  return out;
}

OrderedSequence parse_ordering(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError("ordering file is empty");
  }
  std::istringstream header(line);
  std::string hash, magic, version;
  header >> hash >> magic >> version;
  if (hash != "#" || magic != "spx-order" || version != "v1") {
    throw FormatError("ordering file has no 'spx-order v1' header");
  }

  OrderedSequence seq;
  bool have_n = false, have_method = false, have_conn = false;
  std::string field;
  while (header >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) {
      throw FormatError("malformed header field '" + field + "'");
    }
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    try {
      if (key == "n") {
        seq.n = std::stoull(value);
        have_n = true;
      } else if (key == "method") {
        seq.method = OrderingMethod::parse(value);
        have_method = true;
      } else if (key == "connectivity") {
        if (value == "4") {
          seq.connectivity = Connectivity::four;
        } else if (value == "8") {
          seq.connectivity = Connectivity::eight;
        } else {
          throw FormatError("connectivity must be 4 or 8");
        }
        have_conn = true;
      }
    } catch (const std::logic_error&) {
      throw FormatError("malformed header value '" + field + "'");
    } catch (const ConfigError& e) {
      throw FormatError(e.what());
    }
  }
  if (!have_n || !have_method || !have_conn) {
    throw FormatError("ordering header is missing n, method or connectivity");
  }

  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::size_t value = 0;
    const auto* end = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(line.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
      throw FormatError("malformed pattern index '" + line + "'");
    }
    seq.order.push_back(value);
  }
  if (!is_permutation_of_range(seq.order, seq.n * seq.n)) {
    throw FormatError("ordering body is not a permutation of [0, n^2)");
  }
  return seq;
}

}  // namespace spx
