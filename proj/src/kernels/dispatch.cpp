// Copyright 2026 The voxsel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <string>

#include "voxsel/error.hpp"
#include "voxsel/kernels.hpp"

namespace voxsel::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(VOXSEL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{table_for(best_available())};
  return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable& scalar_table() { return detail::kScalarTable; }

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return &detail::kScalarTable;
    case Isa::kAvx2:
#if defined(VOXSEL_HAVE_AVX2)
      if (cpu_has_avx2()) return &detail::kAvx2Table;
#endif
      return nullptr;
  }
  return nullptr;
}

bool available(Isa isa) { return table_for(isa) != nullptr; }

Isa best_available() { return available(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar; }

const KernelTable& active() { return *active_slot().load(std::memory_order_acquire); }

void set_active(Isa isa) {
  const KernelTable* t = table_for(isa);
  if (!t) throw DomainError("kernel ISA '" + std::string(isa_name(isa)) + "' is unavailable");
  active_slot().store(t, std::memory_order_release);
}

}  // namespace voxsel::kernels
