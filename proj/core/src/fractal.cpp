#include "qcm/fractal.hpp"

#include <cmath>
#include <string>

#include "qcm/error.hpp"

namespace qcm {

namespace {

void check_generation(const CantorComplex& c, std::size_t generation) {
  if (generation > static_cast<std::size_t>(c.depth())) {
    throw DepthError("generation " + std::to_string(generation) + " exceeds complex depth " +
                     std::to_string(c.depth()));
  }
}

void check_word(const CantorComplex& c, const Word& w) {
  if (w.dimension() != c.dimension()) {
    throw DomainError("word dimension " + std::to_string(w.dimension()) +
                      " does not match complex dimension " + std::to_string(c.dimension()));
  }
  check_generation(c, w.size());
}

}  // namespace

Word::Word(int dimension, std::vector<std::uint32_t> letters)
    : dimension_(dimension), letters_(std::move(letters)) {
  if (dimension < 1 || dimension > kMaxCellBits) {
    throw DomainError("word dimension must be in [1, 20]");
  }
  const std::uint64_t alphabet = std::uint64_t{1} << dimension;
  for (auto letter : letters_) {
    if (letter < 1 || letter > alphabet) {
      throw DomainError("word letter " + std::to_string(letter) + " outside [1, " +
                        std::to_string(alphabet) + "]");
    }
  }
}

Word Word::from_rank(int dimension, int length, std::uint64_t rank) {
  std::vector<std::uint32_t> letters(static_cast<std::size_t>(length));
  const std::uint64_t mask = (std::uint64_t{1} << dimension) - 1;
  for (int i = length - 1; i >= 0; --i) {
    letters[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>((rank & mask) + 1);
    rank >>= dimension;
  }
  return Word(dimension, std::move(letters));
}

std::uint64_t Word::rank() const noexcept {
  std::uint64_t r = 0;
  for (auto letter : letters_) r = (r << dimension_) | (letter - 1);
  return r;
}

Word Word::child(std::uint32_t letter) const {
  auto letters = letters_;
  letters.push_back(letter);
  return Word(dimension_, std::move(letters));
}

bool Word::is_prefix_of(const Word& other) const noexcept {
  if (other.dimension_ != dimension_ || other.size() < size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (letters_[i] != other.letters_[i]) return false;
  }
  return true;
}

double CantorComplex::lambda(int m) const {
  check_generation(*this, static_cast<std::size_t>(m));
  return lambda_.at(static_cast<std::size_t>(m));
}

double CantorComplex::eta(int m) const {
  if (m < 1) throw DomainError("eta is defined for generations m >= 1");
  return lambda(m - 1) - 2.0 * lambda(m);
}

double CantorComplex::offset(int m) const {
  if (m < 1) throw DomainError("offset is defined for generations m >= 1");
  check_generation(*this, static_cast<std::size_t>(m));
  return offset_[static_cast<std::size_t>(m)];
}

CantorComplex build_complex(const GaugeSpec& g, int depth, std::optional<int> n_override) {
  check_parameters(g);
  if (depth < 1) throw DepthError("complex depth must be >= 1");
  const int n = n_override.value_or(default_dimension(g));
  if (n < 1) throw DomainError("dimension must be >= 1");
  if (static_cast<long>(n) * depth > kMaxCellBits) {
    throw SizeError("2^(n*depth) = 2^" + std::to_string(n * depth) +
                    " cells exceeds the 2^20 cap");
  }

  CantorComplex c;
  c.gauge_ = g;
  c.s_ = variation_index(g);
  c.dimension_ = n;
  c.lambda_.resize(static_cast<std::size_t>(depth) + 1);
  c.offset_.assign(static_cast<std::size_t>(depth) + 1, 0.0);
  c.lambda_[0] = 1.0;
  for (int m = 1; m <= depth; ++m) {
    c.lambda_[static_cast<std::size_t>(m)] = inverse(g, std::ldexp(1.0, -n * m));
  }
  for (int m = 1; m <= depth; ++m) {
    const double parent = c.lambda_[static_cast<std::size_t>(m) - 1];
    const double side = c.lambda_[static_cast<std::size_t>(m)];
    if (!(parent - 2.0 * side > 0.0)) {
      throw InfeasibleError("Cantor construction infeasible at generation " +
                            std::to_string(m) + ": lambda_{m-1} <= 2 lambda_m");
    }
    c.offset_[static_cast<std::size_t>(m)] = parent - side;
  }
  return c;
}

std::vector<Word> enumerate_words(const CantorComplex& c, int length) {
  if (length < 0) throw DepthError("word length must be >= 0");
  check_generation(c, static_cast<std::size_t>(length));
  const std::uint64_t count = std::uint64_t{1} << (c.dimension() * length);
  std::vector<Word> words;
  words.reserve(count);
  for (std::uint64_t r = 0; r < count; ++r) {
    words.push_back(Word::from_rank(c.dimension(), length, r));
  }
  return words;
}

CellBox cell_geometry(const CantorComplex& c, const Word& w) {
  check_word(c, w);
  const int n = c.dimension();
  CellBox box;
  box.corner.assign(static_cast<std::size_t>(n), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double step = c.offset(static_cast<int>(i) + 1);
    for (int axis = 0; axis < n; ++axis) {
      if (corner_bit(w[i], n, axis) != 0) box.corner[static_cast<std::size_t>(axis)] += step;
    }
  }
  box.side = c.lambda(static_cast<int>(w.size()));
  return box;
}

double cell_measure(const CantorComplex& c, const Word& w) {
  check_word(c, w);
  return std::ldexp(1.0, -c.dimension() * static_cast<int>(w.size()));
}

double hausdorff_cover_estimate(const CantorComplex& c, const Word& w, int extra_depth) {
  check_word(c, w);
  if (extra_depth < 0) throw DepthError("extra depth must be >= 0");
  const int generation = static_cast<int>(w.size()) + extra_depth;
  check_generation(c, static_cast<std::size_t>(generation));
  const double radius = c.lambda(generation) * std::sqrt(static_cast<double>(c.dimension())) / 2.0;
  return std::ldexp(1.0, c.dimension() * extra_depth) * eval(c.gauge(), radius);
}

double cell_diameter(const CantorComplex& c, int generation) {
  return c.lambda(generation) * std::sqrt(static_cast<double>(c.dimension()));
}

GeometryDocument export_geometry(const CantorComplex& c, int level) {
  GeometryDocument doc;
  doc.dimension = c.dimension();
  doc.level = level;
  for (auto& w : enumerate_words(c, level)) {
    auto box = cell_geometry(c, w);
    const double measure = cell_measure(c, w);
    doc.records.push_back({std::move(w), std::move(box.corner), box.side, measure});
  }
  return doc;
}

}  // namespace qcm
