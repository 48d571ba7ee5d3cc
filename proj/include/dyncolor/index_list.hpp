#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dyncolor {

inline constexpr std::uint32_t kNil = UINT32_MAX;

struct Link {
  std::uint32_t prev = kNil;
  std::uint32_t next = kNil;
};

struct ListHead {
  std::uint32_t first = kNil;
  std::uint32_t last = kNil;
  std::uint32_t size = 0;

  bool empty() const { return size == 0; }
};

/// Doubly linked lists threaded through one shared table of links.
///
/// Nodes are plain indices into the table. Whoever owns a node index can
/// unlink it in O(1) without searching, which is what the adjacency
/// structures rely on: every edge knows the node ids of its two cells.
/// A node belongs to at most one list at a time; the table does not track
/// which one, callers do.
class LinkTable {
 public:
  LinkTable() = default;
  explicit LinkTable(std::size_t nodes) : links_(nodes) {}

  std::size_t capacity() const { return links_.size(); }
  void ensure(std::size_t nodes) {
    if (links_.size() < nodes) links_.resize(nodes);
  }

  void push_back(ListHead& list, std::uint32_t node) {
    Link& l = links_[node];
    l.prev = list.last;
    l.next = kNil;
    if (list.last == kNil)
      list.first = node;
    else
      links_[list.last].next = node;
    list.last = node;
    ++list.size;
  }

  void push_front(ListHead& list, std::uint32_t node) {
    Link& l = links_[node];
    l.prev = kNil;
    l.next = list.first;
    if (list.first == kNil)
      list.last = node;
    else
      links_[list.first].prev = node;
    list.first = node;
    ++list.size;
  }

  void erase(ListHead& list, std::uint32_t node) {
    Link& l = links_[node];
    if (l.prev == kNil)
      list.first = l.next;
    else
      links_[l.prev].next = l.next;
    if (l.next == kNil)
      list.last = l.prev;
    else
      links_[l.next].prev = l.prev;
    l.prev = l.next = kNil;
    --list.size;
  }

  std::uint32_t next(std::uint32_t node) const { return links_[node].next; }

  // The callback may unlink (or relink elsewhere) the node it is handed.
  template <class F>
  void for_each(const ListHead& list, F&& f) const {
    std::uint32_t node = list.first;
    while (node != kNil) {
      const std::uint32_t following = links_[node].next;
      f(node);
      node = following;
    }
  }

 private:
  std::vector<Link> links_;
};

}  // namespace dyncolor
