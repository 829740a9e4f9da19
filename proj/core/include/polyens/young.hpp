#pragma once

#include <cstddef>
#include <vector>

#include "polyens/errors.hpp"

namespace polyens {

/// Integer partition lambda_1 >= lambda_2 >= ... > 0; the empty diagram is
/// allowed.
class YoungDiagram {
 public:
  YoungDiagram() = default;
  explicit YoungDiagram(std::vector<unsigned> parts);

  const std::vector<unsigned>& parts() const { return parts_; }
  std::size_t length() const { return parts_.size(); }
  unsigned boxes() const;
  /// Row length, 0 beyond the last row (1-based would be error-prone; this
  /// is 0-based).
  unsigned part(std::size_t i) const { return i < parts_.size() ? parts_[i] : 0; }
  YoungDiagram conjugate() const;

  bool operator==(const YoungDiagram& other) const = default;

 private:
  std::vector<unsigned> parts_;
};

/// Frobenius coordinates (p_1..p_d | q_1..q_d): arm and leg lengths of the
/// d diagonal boxes, both strictly decreasing.
struct FrobeniusCoords {
  std::vector<unsigned> p;
  std::vector<unsigned> q;
  std::size_t d() const { return p.size(); }
};

FrobeniusCoords frobenius(const YoungDiagram& lambda);
YoungDiagram from_frobenius(const FrobeniusCoords& fc);

/// Hook diagram (p|q) = (p+1, 1^q).
YoungDiagram hook_diagram(unsigned p, unsigned q);

/// All partitions of exactly n boxes (n = 0 gives the empty diagram).
std::vector<YoungDiagram> diagrams_with_boxes(unsigned n);

}  // namespace polyens
