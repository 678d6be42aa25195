#pragma once

// Naive LRU write-back write-allocate cache: each set is a recency-ordered
// list, most recent first. Used only to cross-check the simulator counters.

#include <algorithm>
#include <cstdint>
#include <list>
#include <vector>

namespace meram::oracle {

struct RefCounters {
  std::uint64_t read_hits = 0;
  std::uint64_t read_misses = 0;
  std::uint64_t write_hits = 0;
  std::uint64_t write_misses = 0;
  std::uint64_t writebacks = 0;
};

struct RefAccess {
  bool write;
  std::uint64_t address;
};

inline RefCounters reference_simulate(std::uint64_t capacity, unsigned assoc, unsigned line,
                                      const std::vector<RefAccess>& trace) {
  struct Entry {
    std::uint64_t line_addr;
    bool dirty;
  };
  const std::uint64_t sets = capacity / line / assoc;
  std::vector<std::list<Entry>> table(sets);
  RefCounters c;
  for (const auto& a : trace) {
    const std::uint64_t line_addr = a.address / line;
    auto& set = table[line_addr % sets];
    auto it = std::find_if(set.begin(), set.end(), [&](const Entry& e) { return e.line_addr == line_addr; });
    if (it != set.end()) {
      Entry e = *it;
      set.erase(it);
      e.dirty = e.dirty || a.write;
      set.push_front(e);
      ++(a.write ? c.write_hits : c.read_hits);
      continue;
    }
    ++(a.write ? c.write_misses : c.read_misses);
    if (set.size() == assoc) {
      if (set.back().dirty) ++c.writebacks;
      set.pop_back();
    }
    set.push_front(Entry{line_addr, a.write});
  }
  return c;
}

}  // namespace meram::oracle
