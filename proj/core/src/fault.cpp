#include "qtt/fault.hpp"

#include <atomic>

namespace qtt::fault {

namespace {
std::atomic<bool> g_disable_split{false};
}

void set_disable_tolerance_split(bool on) noexcept { g_disable_split.store(on); }
bool disable_tolerance_split() noexcept { return g_disable_split.load(); }

}  // namespace qtt::fault
