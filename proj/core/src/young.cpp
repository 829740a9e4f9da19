#include "polyens/young.hpp"

#include <algorithm>
#include <functional>

namespace polyens {

YoungDiagram::YoungDiagram(std::vector<unsigned> parts)
    : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] == 0) {
      throw PreconditionError("YoungDiagram: parts must be positive");
    }
    if (i > 0 && parts_[i] > parts_[i - 1]) {
      throw PreconditionError("YoungDiagram: parts must be weakly decreasing");
    }
  }
}

unsigned YoungDiagram::boxes() const {
  unsigned b = 0;
  for (unsigned p : parts_) b += p;
  return b;
}

YoungDiagram YoungDiagram::conjugate() const {
  if (parts_.empty()) return {};
  std::vector<unsigned> conj(parts_[0], 0);
  for (unsigned p : parts_) {
    for (unsigned j = 0; j < p; ++j) conj[j]++;
  }
  return YoungDiagram(std::move(conj));
}

FrobeniusCoords frobenius(const YoungDiagram& lambda) {
  FrobeniusCoords fc;
  YoungDiagram conj = lambda.conjugate();
  for (std::size_t i = 0; i < lambda.length(); ++i) {
    if (lambda.part(i) < i + 1) break;
    fc.p.push_back(lambda.part(i) - static_cast<unsigned>(i) - 1);
    fc.q.push_back(conj.part(i) - static_cast<unsigned>(i) - 1);
  }
  return fc;
}

YoungDiagram from_frobenius(const FrobeniusCoords& fc) {
  if (fc.p.size() != fc.q.size()) {
    throw PreconditionError("from_frobenius: p and q must have equal length");
  }
  const std::size_t d = fc.d();
  for (std::size_t i = 1; i < d; ++i) {
    if (fc.p[i] >= fc.p[i - 1] || fc.q[i] >= fc.q[i - 1]) {
      throw PreconditionError("from_frobenius: coordinates must be strictly "
                              "decreasing");
    }
  }
  // Rows 1..d come from arms; rows beyond d from the column data.
  std::size_t height = d;
  for (std::size_t j = 0; j < d; ++j) {
    height = std::max(height, static_cast<std::size_t>(fc.q[j]) + j + 1);
  }
  std::vector<unsigned> parts(height, 0);
  for (std::size_t i = 0; i < d; ++i) {
    parts[i] = fc.p[i] + static_cast<unsigned>(i) + 1;
  }
  for (std::size_t i = d; i < height; ++i) {
    unsigned row = 0;
    for (std::size_t j = 0; j < d; ++j) {
      if (static_cast<std::size_t>(fc.q[j]) + j + 1 >= i + 1) {
        row = static_cast<unsigned>(j) + 1;
      }
    }
    parts[i] = row;
  }
  while (!parts.empty() && parts.back() == 0) parts.pop_back();
  return YoungDiagram(std::move(parts));
}

YoungDiagram hook_diagram(unsigned p, unsigned q) {
  std::vector<unsigned> parts;
  parts.push_back(p + 1);
  for (unsigned i = 0; i < q; ++i) parts.push_back(1);
  return YoungDiagram(std::move(parts));
}

std::vector<YoungDiagram> diagrams_with_boxes(unsigned n) {
  std::vector<YoungDiagram> out;
  std::vector<unsigned> current;
  std::function<void(unsigned, unsigned)> rec = [&](unsigned remaining,
                                                    unsigned max_part) {
    if (remaining == 0) {
      out.emplace_back(current);
      return;
    }
    for (unsigned p = std::min(remaining, max_part); p >= 1; --p) {
      current.push_back(p);
      rec(remaining - p, p);
      current.pop_back();
    }
  };
  rec(n, n == 0 ? 1 : n);
  return out;
}

}  // namespace polyens
