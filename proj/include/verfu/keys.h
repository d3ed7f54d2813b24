/*
 * Copyright 2026 The verfu Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Trusted-dealer setup: one Paillier key pair shared by all devices, public
// LHH and commitment parameters over a common safe-prime group, and the
// commitment trapdoor, which only the test harness ever sees.

#ifndef VERFU_KEYS_H_
#define VERFU_KEYS_H_

#include <cstdint>
#include <filesystem>
#include <optional>

#include "verfu/commitment.h"
#include "verfu/lhh.h"
#include "verfu/paillier.h"

namespace verfu {

struct KeySpec {
  unsigned kappa_paillier = 256;  // bits of n
  unsigned kappa_group = 256;     // bits of p
  size_t dim = 16;
};

struct KeyMaterial {
  KeySpec spec;
  PaillierKeyPair paillier;
  LhhParams lhh;
  ComParams com;
  std::optional<Trapdoor> trapdoor;

  const PaillierPublicKey& pk() const { return paillier.pk; }
  const PaillierSecretKey& sk() const { return paillier.sk; }
};

KeyMaterial GenerateKeyMaterial(const KeySpec& spec, uint64_t seed);

inline constexpr const char* kPublicKeyFile = "public.json";
inline constexpr const char* kSecretKeyFile = "secret.json";
inline constexpr const char* kTrapdoorFile = "trapdoor.json";

// Throws kIo when `dir` does not exist or a file cannot be written. The
// trapdoor file is written only when emit_trapdoor is set.
void WriteKeyMaterial(const KeyMaterial& keys, const std::filesystem::path& dir, bool emit_trapdoor);
// Loads public and secret material, plus the trapdoor when its file exists.
KeyMaterial ReadKeyMaterial(const std::filesystem::path& dir);

}  // namespace verfu

#endif  // VERFU_KEYS_H_
