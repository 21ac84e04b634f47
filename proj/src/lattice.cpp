#include "trg/lattice.hpp"

#include "trg/error.hpp"

namespace trg {

bool includes(const Fragment& outer, const Fragment& inner) {
  if (outer.instance_id != inner.instance_id)
    throw DataError("inclusion between fragments of different instances ('" + outer.instance_id +
                    "' vs '" + inner.instance_id + "')");
  return includes(outer.span, inner.span);
}

FragmentTriangle::FragmentTriangle(std::string instance_id, std::size_t token_count)
    : instance_id_(std::move(instance_id)), n_(token_count) {}

// Row k starts after rows 1..k-1, which hold sum_{j<k} (n-j+1) fragments.
std::size_t FragmentTriangle::index(const Span& s) const {
  if (!contains(s)) throw DataError("span outside triangle");
  const std::size_t k = s.length();
  const std::size_t offset = (k - 1) * n_ - (k - 1) * (k - 2) / 2;
  return offset + s.start;
}

Span FragmentTriangle::span(std::size_t index) const {
  std::size_t k = 1;
  std::size_t row_size = n_;
  while (index >= row_size) {
    index -= row_size;
    ++k;
    --row_size;
  }
  return {index, index + k};
}

std::vector<Span> FragmentTriangle::row(std::size_t k) const {
  std::vector<Span> out;
  if (k == 0 || k > n_) return out;
  for (std::size_t s = 0; s + k <= n_; ++s) out.push_back({s, s + k});
  return out;
}

std::vector<Span> FragmentTriangle::all() const {
  std::vector<Span> out;
  out.reserve(size());
  for (std::size_t k = 1; k <= n_; ++k)
    for (std::size_t s = 0; s + k <= n_; ++s) out.push_back({s, s + k});
  return out;
}

FragmentTriangle enumerate_fragments(const Instance& instance) {
  return FragmentTriangle(instance.id, instance.tokens.size());
}

std::vector<Span> neighbours(const Span& w, const FragmentTriangle& triangle, Neighbourhood mode) {
  if (!triangle.contains(w)) throw DataError("fragment outside triangle");
  std::vector<Span> out;
  for (const auto& s : triangle.all()) {
    if (mode == Neighbourhood::immediate ? adjacent(s, w) : (includes(s, w) || includes(w, s)))
      out.push_back(s);
  }
  return out;
}

std::string surface(const Span& w, const Instance& instance) {
  if (w.start >= w.end || w.end > instance.tokens.size())
    throw DataError("span [" + std::to_string(w.start) + "," + std::to_string(w.end) +
                    ") out of range for instance '" + instance.id + "'");
  return join_tokens(instance.tokens, w.start, w.end);
}

}  // namespace trg
