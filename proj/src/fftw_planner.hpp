#pragma once

#include <mutex>

namespace bicap::detail {

// FFTW's planner is not reentrant; every plan creation and destruction in
// the library goes through this lock.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace bicap::detail
