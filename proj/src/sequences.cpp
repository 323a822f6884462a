#include "polydense/sequences.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "polydense/error.hpp"
#include "polydense/polynomial.hpp"
#include "polydense/sieve.hpp"

namespace polydense {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr std::uint64_t kMaxPolynomialScan = 100'000'000;

template <typename Int>
Int parse_int(std::string_view token, std::string_view what) {
  Int value{};
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  if (!token.empty() && token.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw PreconditionError("malformed integer '" + std::string(token) + "' in " + std::string(what));
  }
  return value;
}

template <typename Int>
std::vector<Int> parse_list(std::string_view body, std::string_view what) {
  std::vector<Int> values;
  std::size_t start = 0;
  while (start <= body.size()) {
    const std::size_t comma = body.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? body.size() : comma;
    values.push_back(parse_int<Int>(body.substr(start, end - start), what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return values;
}

std::vector<std::uint64_t> read_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sequence list file '" + path + "'");
  std::vector<std::uint64_t> values;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    values.push_back(parse_int<std::uint64_t>(std::string_view(line).substr(first, last - first + 1), path));
  }
  return values;
}

template <typename Int>
std::string join(const std::vector<Int>& values) {
  std::ostringstream out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    out << values[i];
  }
  return out.str();
}

std::uint64_t pow2(unsigned k) { return std::uint64_t{1} << k; }

std::vector<std::uint64_t> polynomial_elements(const PolynomialRange& poly, std::uint64_t bound,
                                               std::size_t max_elements) {
  const auto& c = poly.coefficients;
  const std::uint64_t tail = monotone_tail_start(c);
  require(tail <= kMaxPolynomialScan, "polynomial " + render_sequence(poly) +
                                          " has a non-monotone prefix past n = " + std::to_string(kMaxPolynomialScan));
  std::vector<std::uint64_t> values;
  for (std::uint64_t n = 1;; ++n) {
    const auto value = evaluate_checked(c, n);
    if (!value) {
      if (n >= tail) break;
      continue;
    }
    const int128 magnitude = *value < 0 ? -*value : *value;
    if (magnitude >= 1 && magnitude <= static_cast<int128>(bound)) {
      values.push_back(static_cast<std::uint64_t>(magnitude));
      require(values.size() <= max_elements, "window of " + render_sequence(poly) + " exceeds " +
                                                 std::to_string(max_elements) + " elements");
    } else if (n >= tail && magnitude > static_cast<int128>(bound)) {
      break;
    }
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

std::vector<std::uint64_t> surrogate_elements(const PseudoRandomOffset& s, std::uint64_t bound,
                                              std::size_t max_elements) {
  std::vector<std::uint64_t> values;
  if (bound < 4) return values;
  std::mt19937_64 stream(s.seed);
  for (std::uint64_t n = 1; n <= (bound - 1) / 3; ++n) {
    const std::uint64_t element = 3 * n + 1 + (stream() >> 63);
    if (element > bound) break;
    values.push_back(element);
    require(values.size() <= max_elements, "surrogate window exceeds " + std::to_string(max_elements) + " elements");
  }
  return values;
}

std::vector<Run> runs_from_sorted(const std::vector<std::uint64_t>& values) {
  std::vector<Run> runs;
  for (std::uint64_t v : values) {
    if (!runs.empty() && runs.back().hi + 1 == v) {
      runs.back().hi = v;
    } else {
      runs.push_back({v, v});
    }
  }
  return runs;
}

std::uint64_t run_length_total(const std::vector<Run>& runs) {
  std::uint64_t total = 0;
  for (const auto& r : runs) total += r.hi - r.lo + 1;
  return total;
}

}  // namespace

std::vector<Run> zelinsky_blocks() {
  std::vector<Run> blocks;
  for (unsigned k = 0; k <= 5; ++k) {
    const std::uint64_t lo = pow2(1u << k);
    const std::uint64_t hi = k == 5 ? kDomainMax : pow2(1u << (k + 1)) - 1;
    blocks.push_back({lo, hi});
  }
  return blocks;
}

unsigned zelinsky_block_index(std::uint64_t n) {
  require(n >= 2, "Zelinsky blocks start at 2");
  // B_k holds exactly the n with 2^k <= floor(log2 n) < 2^(k+1).
  const unsigned log2 = 63 - static_cast<unsigned>(std::countl_zero(n));
  return static_cast<unsigned>(std::bit_width(log2)) - 1;
}

void validate(const SequenceSpec& spec) {
  std::visit(overloaded{
                 [](const PolynomialRange& p) {
                   require(p.coefficients.size() >= 2, "polynomial must have degree >= 1");
                   require(p.coefficients.back() != 0, "polynomial leading coefficient must be nonzero");
                 },
                 [](const ArithmeticProgression& ap) { require(ap.a >= 1, "arithmetic progression needs a >= 1"); },
                 [](const PowersOfTwo&) {},
                 [](const ZelinskyLacunary&) {},
                 [](const PseudoRandomOffset&) {},
                 [](const ExplicitList& list) {
                   for (std::size_t i = 0; i < list.elements.size(); ++i) {
                     require(list.elements[i] >= 1, "explicit list elements must be >= 1");
                     require(list.elements[i] <= kDomainMax, "explicit list elements must be <= 2^63 - 1");
                     require(i == 0 || list.elements[i - 1] < list.elements[i],
                             "explicit list must be strictly increasing");
                   }
                 },
             },
             spec);
}

SequenceSpec parse_sequence(std::string_view text) {
  const std::size_t colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view body = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const bool has_body = colon != std::string_view::npos;
  SequenceSpec spec;
  if (head == "poly") {
    require(has_body, "poly needs coefficients, e.g. poly:1,0,1");
    spec = PolynomialRange{parse_list<std::int64_t>(body, "poly")};
  } else if (head == "ap") {
    require(has_body, "ap needs a,b, e.g. ap:4,1");
    const auto v = parse_list<std::uint64_t>(body, "ap");
    require(v.size() == 2, "ap takes exactly two parameters a,b");
    spec = ArithmeticProgression{v[0], v[1]};
  } else if (head == "pow2") {
    require(!has_body, "pow2 takes no parameters");
    spec = PowersOfTwo{};
  } else if (head == "zelinsky") {
    if (!has_body || body == "odd") {
      spec = ZelinskyLacunary{BlockParity::odd};
    } else if (body == "even") {
      spec = ZelinskyLacunary{BlockParity::even};
    } else {
      throw PreconditionError("zelinsky selector must be 'odd' or 'even', got '" + std::string(body) + "'");
    }
  } else if (head == "surrogate") {
    require(has_body, "surrogate needs a seed, e.g. surrogate:1");
    spec = PseudoRandomOffset{parse_int<std::uint64_t>(body, "surrogate")};
  } else if (head == "list") {
    require(has_body, "list needs elements or @file");
    if (!body.empty() && body.front() == '@') {
      spec = ExplicitList{read_list_file(std::string(body.substr(1)))};
    } else if (body.empty()) {
      spec = ExplicitList{};
    } else {
      spec = ExplicitList{parse_list<std::uint64_t>(body, "list")};
    }
  } else {
    throw PreconditionError("unknown sequence kind '" + std::string(head) + "' in '" + std::string(text) + "'");
  }
  validate(spec);
  return spec;
}

std::string render_sequence(const SequenceSpec& spec) {
  return std::visit(overloaded{
                        [](const PolynomialRange& p) { return "poly:" + join(p.coefficients); },
                        [](const ArithmeticProgression& ap) {
                          return "ap:" + std::to_string(ap.a) + "," + std::to_string(ap.b);
                        },
                        [](const PowersOfTwo&) { return std::string("pow2"); },
                        [](const ZelinskyLacunary& z) {
                          return std::string(z.parity == BlockParity::odd ? "zelinsky" : "zelinsky:even");
                        },
                        [](const PseudoRandomOffset& s) { return "surrogate:" + std::to_string(s.seed); },
                        [](const ExplicitList& l) { return "list:" + join(l.elements); },
                    },
                    spec);
}

bool is_infinite(const SequenceSpec& spec) { return !std::holds_alternative<ExplicitList>(spec); }

std::vector<Run> element_runs(const SequenceSpec& spec, std::uint64_t bound, std::size_t max_elements) {
  validate(spec);
  const std::uint64_t top = std::min(bound, kDomainMax);
  return std::visit(
      overloaded{
          [&](const PolynomialRange& p) { return runs_from_sorted(polynomial_elements(p, top, max_elements)); },
          [&](const ArithmeticProgression& ap) {
            std::vector<Run> runs;
            if (top < ap.a + ap.b) return runs;
            if (ap.a == 1) {
              runs.push_back({ap.b + 1, top});
              return runs;
            }
            const std::uint64_t count = (top - ap.b) / ap.a;
            require(count <= max_elements, "window of " + render_sequence(spec) + " exceeds " +
                                               std::to_string(max_elements) + " elements");
            for (std::uint64_t k = 1; k <= count; ++k) runs.push_back({ap.a * k + ap.b, ap.a * k + ap.b});
            return runs;
          },
          [&](const PowersOfTwo&) {
            std::vector<Run> runs;
            for (unsigned k = 1; k < 63 && pow2(k) <= top; ++k) runs.push_back({pow2(k), pow2(k)});
            return runs;
          },
          [&](const ZelinskyLacunary& z) {
            std::vector<Run> runs;
            if (z.parity == BlockParity::even && top >= 1) runs.push_back({1, 1});
            const auto blocks = zelinsky_blocks();
            for (unsigned k = 0; k < blocks.size(); ++k) {
              const bool odd = k % 2 == 1;
              if (odd != (z.parity == BlockParity::odd)) continue;
              if (blocks[k].lo > top) break;
              runs.push_back({blocks[k].lo, std::min(blocks[k].hi, top)});
            }
            // {1} and B_0 = [2, 3] are adjacent.
            if (runs.size() >= 2 && runs[0].hi + 1 == runs[1].lo) {
              runs[0].hi = runs[1].hi;
              runs.erase(runs.begin() + 1);
            }
            return runs;
          },
          [&](const PseudoRandomOffset& s) { return runs_from_sorted(surrogate_elements(s, top, max_elements)); },
          [&](const ExplicitList& l) {
            std::vector<std::uint64_t> kept;
            for (auto v : l.elements) {
              if (v > top) break;
              kept.push_back(v);
            }
            return runs_from_sorted(kept);
          },
      },
      spec);
}

SequenceWindow enumerate_window(const SequenceSpec& spec, std::uint64_t bound, std::size_t max_elements) {
  require(bound >= 1, "window bound must be >= 1");
  const auto runs = element_runs(spec, bound, max_elements);
  const std::uint64_t total = run_length_total(runs);
  require(total <= max_elements, "window of " + render_sequence(spec) + " at bound " + std::to_string(bound) +
                                     " has " + std::to_string(total) + " elements, over the cap of " +
                                     std::to_string(max_elements));
  SequenceWindow window{.spec = spec, .bound = bound, .elements = {}, .truncated = false};
  window.elements.reserve(static_cast<std::size_t>(total));
  for (const auto& r : runs) {
    for (std::uint64_t v = r.lo;; ++v) {
      window.elements.push_back(v);
      if (v == r.hi) break;
    }
  }
  window.truncated = bound > kDomainMax && is_infinite(spec);
  return window;
}

std::uint64_t counting_function(const SequenceSpec& spec, std::uint64_t n) {
  validate(spec);
  const std::uint64_t top = std::min(n, kDomainMax);
  if (const auto* ap = std::get_if<ArithmeticProgression>(&spec)) {
    if (top < ap->a + ap->b) return 0;
    return (top - ap->b) / ap->a;
  }
  if (std::holds_alternative<PowersOfTwo>(spec)) {
    return top < 2 ? 0 : 63 - static_cast<std::uint64_t>(std::countl_zero(top));
  }
  if (const auto* list = std::get_if<ExplicitList>(&spec)) {
    return static_cast<std::uint64_t>(std::upper_bound(list->elements.begin(), list->elements.end(), top) -
                                      list->elements.begin());
  }
  if (top == 0) return 0;
  return run_length_total(element_runs(spec, top));
}

namespace {

long double required_count(long double K, long double n, long double inv_alpha) { return K * std::pow(n, inv_alpha); }

}  // namespace

DensityCheck check_polynomial_density(const SequenceSpec& spec, double alpha, double K, std::uint64_t lo,
                                      std::uint64_t hi) {
  require(alpha >= 1.0, "alpha must be >= 1");
  require(K > 0.0, "K must be > 0");
  require(lo >= 1 && lo <= hi, "density range must be nonempty with lo >= 1");
  const long double inv_alpha = 1.0L / alpha;
  const long double k = K;
  const auto runs = element_runs(spec, hi);

  DensityCheck result;
  auto fail = [&](std::uint64_t n, std::uint64_t count) {
    result.holds = false;
    result.counterexample = n;
    result.count_at_counterexample = count;
    result.required_at_counterexample = static_cast<double>(required_count(k, n, inv_alpha));
    return result;
  };

  // Constant stretch [a, b] with count c: first n where K n^(1/alpha) > c.
  auto scan_flat = [&](std::uint64_t a, std::uint64_t b, std::uint64_t c) -> std::optional<std::uint64_t> {
    auto violated = [&](std::uint64_t n) { return static_cast<long double>(c) < required_count(k, n, inv_alpha); };
    if (!violated(b)) return std::nullopt;
    while (a < b) {
      const std::uint64_t mid = a + (b - a) / 2;
      if (violated(mid)) b = mid; else a = mid + 1;
    }
    return a;
  };

  // Run [a, b] where count(n) = base + (n - start + 1); h(n) = count - K n^(1/alpha) is convex.
  auto scan_run = [&](std::uint64_t a, std::uint64_t b, std::uint64_t start,
                      std::uint64_t base) -> std::optional<std::uint64_t> {
    auto h = [&](std::uint64_t n) {
      return static_cast<long double>(base + (n - start + 1)) - required_count(k, n, inv_alpha);
    };
    if (h(a) < 0) return a;
    std::uint64_t m = a;
    if (alpha == 1.0) {
      m = K > 1.0 ? b : a;
    } else {
      const long double x = std::pow(k * inv_alpha, alpha / (alpha - 1.0L));
      for (long double cand : {std::floor(x), std::ceil(x)}) {
        const std::uint64_t c =
            cand <= a ? a : (cand >= static_cast<long double>(b) ? b : static_cast<std::uint64_t>(cand));
        if (h(c) < h(m)) m = c;
      }
      if (h(b) < h(m)) m = b;
    }
    if (h(m) >= 0) return std::nullopt;
    std::uint64_t left = a, right = m;
    while (left < right) {
      const std::uint64_t mid = left + (right - left) / 2;
      if (h(mid) < 0) right = mid; else left = mid + 1;
    }
    return left;
  };

  std::uint64_t before = 0;  // elements below `cursor`
  std::uint64_t cursor = lo;
  for (const auto& r : runs) {
    if (r.hi < lo) {
      before += r.hi - r.lo + 1;
      continue;
    }
    if (r.lo > cursor) {
      const std::uint64_t gap_end = std::min(r.lo - 1, hi);
      if (auto n = scan_flat(cursor, gap_end, before)) return fail(*n, before);
      if (gap_end == hi) return result;
      cursor = r.lo;
    }
    const std::uint64_t start = r.lo;
    const std::uint64_t base = before;
    const std::uint64_t end = std::min(r.hi, hi);
    if (auto n = scan_run(cursor, end, start, base)) return fail(*n, base + (*n - start + 1));
    before = base + (r.hi - r.lo + 1);
    if (end == hi) return result;
    cursor = end + 1;
  }
  if (cursor <= hi) {
    if (auto n = scan_flat(cursor, hi, before)) return fail(*n, before);
  }
  return result;
}

DensityEstimate estimate_density(const SequenceSpec& spec, std::uint64_t bound) {
  const auto window = enumerate_window(spec, bound);
  const std::size_t n = window.elements.size();
  require(n >= 10, "density estimate needs >= 10 window elements, got " + std::to_string(n));
  long double mean_x = 0, mean_y = 0;
  for (std::size_t j = 0; j < n; ++j) {
    mean_x += std::log(static_cast<long double>(j + 1));
    mean_y += std::log(static_cast<long double>(window.elements[j]));
  }
  mean_x /= n;
  mean_y /= n;
  long double sxx = 0, sxy = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const long double dx = std::log(static_cast<long double>(j + 1)) - mean_x;
    const long double dy = std::log(static_cast<long double>(window.elements[j])) - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
  }
  const long double slope = sxy / sxx;
  const long double intercept = mean_y - slope * mean_x;
  long double worst = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const long double fit = intercept + slope * std::log(static_cast<long double>(j + 1));
    worst = std::max(worst, std::fabs(std::log(static_cast<long double>(window.elements[j])) - fit));
  }
  return DensityEstimate{.alpha_hat = static_cast<double>(slope),
                         .K_hat = static_cast<double>(std::exp(intercept)),
                         .max_residual = static_cast<double>(worst),
                         .first_index = 1,
                         .last_index = n,
                         .bound = bound};
}

}  // namespace polydense
