#ifndef TRG_LATTICE_HPP
#define TRG_LATTICE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "trg/corpus.hpp"

namespace trg {

/// Half-open token range [start, end) inside one instance.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  bool overlaps(const Span& o) const { return start < o.end && o.start < end; }

  friend bool operator==(const Span&, const Span&) = default;
  friend auto operator<=>(const Span&, const Span&) = default;
};

/// Strict containment: `outer` includes `inner` and differs from it.
inline bool includes(const Span& outer, const Span& inner) {
  return outer.start <= inner.start && inner.end <= outer.end && outer != inner;
}

/// Containment with a length difference of exactly one (an edge of the
/// fragment triangle).
inline bool adjacent(const Span& a, const Span& b) {
  return (includes(a, b) && a.length() == b.length() + 1) ||
         (includes(b, a) && b.length() == a.length() + 1);
}

/// A span tagged with the instance it belongs to.
struct Fragment {
  std::string instance_id;
  Span span;

  friend bool operator==(const Fragment&, const Fragment&) = default;
};

/// Throws DataError when the fragments come from different instances.
bool includes(const Fragment& outer, const Fragment& inner);

enum class Neighbourhood {
  comparable,  // every inclusion-comparable fragment
  immediate,   // only fragments one token longer or shorter
};

/// All n(n+1)/2 fragments of an n-token TD. Row k (1-based length) holds the
/// n-k+1 fragments of that length ordered by start. Fragments are addressed
/// by a dense index: rows stacked from length 1 upward.
class FragmentTriangle {
 public:
  FragmentTriangle(std::string instance_id, std::size_t token_count);

  const std::string& instance_id() const { return instance_id_; }
  std::size_t token_count() const { return n_; }
  std::size_t size() const { return n_ * (n_ + 1) / 2; }

  std::size_t index(const Span& s) const;
  Span span(std::size_t index) const;
  bool contains(const Span& s) const { return s.start < s.end && s.end <= n_; }

  /// Fragments of length k, ordered by start.
  std::vector<Span> row(std::size_t k) const;
  /// Every fragment, in index order.
  std::vector<Span> all() const;

 private:
  std::string instance_id_;
  std::size_t n_;
};

FragmentTriangle enumerate_fragments(const Instance& instance);

/// Fragments comparable to `w` under inclusion (or only those one step away
/// for Neighbourhood::immediate), in triangle index order.
std::vector<Span> neighbours(const Span& w, const FragmentTriangle& triangle,
                             Neighbourhood mode = Neighbourhood::comparable);

/// Tokens of `w` joined by single spaces. Throws DataError when out of range.
std::string surface(const Span& w, const Instance& instance);

}  // namespace trg

#endif  // TRG_LATTICE_HPP
