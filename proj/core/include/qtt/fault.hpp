#pragma once

namespace qtt::fault {

/// Test hook: when set, truncation sweeps use the full tolerance at every step instead of
/// tol/sqrt(d), so the accumulated error can exceed the requested bound.
void set_disable_tolerance_split(bool on) noexcept;
bool disable_tolerance_split() noexcept;

/// Enables the hook for the lifetime of the guard.
class ScopedFault {
public:
    explicit ScopedFault(bool on) noexcept : previous_(disable_tolerance_split()) {
        set_disable_tolerance_split(on);
    }
    ~ScopedFault() { set_disable_tolerance_split(previous_); }
    ScopedFault(const ScopedFault&) = delete;
    ScopedFault& operator=(const ScopedFault&) = delete;

private:
    bool previous_;
};

}  // namespace qtt::fault
