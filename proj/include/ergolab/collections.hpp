#ifndef ERGOLAB_COLLECTIONS_HPP
#define ERGOLAB_COLLECTIONS_HPP

#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "ergolab/shift.hpp"

namespace ergolab {

// Collection C of orbit segments, as a predicate on the segment word
// x_{[0,n)}.  Membership reads only those coordinates (declared radius 0),
// which keeps it constant on separation classes at every dyadic scale.
struct segment_collection {
  std::string name = "all";
  std::function<bool(const word&)> pred; // null = every segment

  bool contains(const word& core) const { return !pred || pred(core); }
  bool is_all() const { return !pred; }

  static segment_collection everything() { return segment_collection{}; }

  static segment_collection nothing() {
    return segment_collection{"empty", [](const word&) { return false; }};
  }

  static segment_collection complement(segment_collection c) {
    auto inner = std::make_shared<segment_collection>(std::move(c));
    return segment_collection{"not(" + inner->name + ")",
                              [inner](const word& w) { return !inner->contains(w); }};
  }

  static segment_collection unite(segment_collection a, segment_collection b) {
    auto pa = std::make_shared<segment_collection>(std::move(a));
    auto pb = std::make_shared<segment_collection>(std::move(b));
    return segment_collection{
        pa->name + "+" + pb->name,
        [pa, pb](const word& w) { return pa->contains(w) || pb->contains(w); }};
  }

  static segment_collection intersect(segment_collection a, segment_collection b) {
    auto pa = std::make_shared<segment_collection>(std::move(a));
    auto pb = std::make_shared<segment_collection>(std::move(b));
    return segment_collection{
        pa->name + "&" + pb->name,
        [pa, pb](const word& w) { return pa->contains(w) && pb->contains(w); }};
  }
};

} // namespace ergolab

#endif
