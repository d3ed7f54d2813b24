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

#include "verfu/keys.h"

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "verfu/status.h"

namespace verfu {
namespace {

using nlohmann::ordered_json;

std::string Hex(const BigUint& x) { return x.get_str(16); }

BigUint ParseHex(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw VerfuError(ErrorCode::kIo, std::string("key file is missing field '") + key + "'");
  }
  BigUint x;
  if (x.set_str(j[key].get<std::string>(), 16) != 0) {
    throw VerfuError(ErrorCode::kIo, std::string("field '") + key + "' is not hex");
  }
  return x;
}

void WriteJson(const std::filesystem::path& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw VerfuError(ErrorCode::kIo, "cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw VerfuError(ErrorCode::kIo, "failed writing " + path.string());
}

ordered_json ReadJson(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw VerfuError(ErrorCode::kIo, "cannot read " + path.string());
  try {
    return ordered_json::parse(in);
  } catch (const ordered_json::exception& e) {
    throw VerfuError(ErrorCode::kIo, path.string() + ": " + e.what());
  }
}

}  // namespace

KeyMaterial GenerateKeyMaterial(const KeySpec& spec, uint64_t seed) {
  KeyMaterial keys;
  keys.spec = spec;
  Rng paillier_rng = Rng::Derive(seed, "dealer:paillier");
  keys.paillier = PaillierKeygen(spec.kappa_paillier, paillier_rng);
  GroupDesc group = MakeGroup(spec.kappa_group, seed, "verfu-group-" + std::to_string(seed));
  keys.lhh = LhhSetup(group, spec.dim);
  Rng com_rng = Rng::Derive(seed, "dealer:commitment");
  auto [com, trapdoor] = ComSetup(group, com_rng);
  keys.com = std::move(com);
  keys.trapdoor = std::move(trapdoor);
  return keys;
}

void WriteKeyMaterial(const KeyMaterial& keys, const std::filesystem::path& dir, bool emit_trapdoor) {
  if (!std::filesystem::is_directory(dir)) {
    throw VerfuError(ErrorCode::kIo, "output directory does not exist: " + dir.string());
  }
  ordered_json pub;
  pub["kappa_paillier"] = keys.spec.kappa_paillier;
  pub["kappa_group"] = keys.spec.kappa_group;
  pub["dim"] = keys.spec.dim;
  pub["paillier_n"] = Hex(keys.pk().n);
  pub["group_p"] = Hex(keys.lhh.group.p_mod);
  pub["group_q"] = Hex(keys.lhh.group.q_order);
  pub["group_seed"] = keys.lhh.group.seed;
  ordered_json gens = ordered_json::array();
  for (const BigUint& g : keys.lhh.generators) gens.push_back(Hex(g));
  pub["lhh_generators"] = std::move(gens);
  pub["com_g"] = Hex(keys.com.g);
  pub["com_h"] = Hex(keys.com.h);
  WriteJson(dir / kPublicKeyFile, pub);

  ordered_json sec;
  sec["paillier_p"] = Hex(keys.sk().p);
  sec["paillier_q"] = Hex(keys.sk().q);
  sec["paillier_lambda"] = Hex(keys.sk().lambda);
  sec["paillier_mu"] = Hex(keys.sk().mu);
  WriteJson(dir / kSecretKeyFile, sec);

  if (emit_trapdoor) {
    if (!keys.trapdoor) throw VerfuError(ErrorCode::kTrapdoorRequired, "no trapdoor to emit");
    ordered_json td;
    td["alpha"] = Hex(keys.trapdoor->alpha);
    WriteJson(dir / kTrapdoorFile, td);
  }
}

KeyMaterial ReadKeyMaterial(const std::filesystem::path& dir) {
  ordered_json pub = ReadJson(dir / kPublicKeyFile);
  ordered_json sec = ReadJson(dir / kSecretKeyFile);
  KeyMaterial keys;
  try {
    keys.spec.kappa_paillier = pub.at("kappa_paillier").get<unsigned>();
    keys.spec.kappa_group = pub.at("kappa_group").get<unsigned>();
    keys.spec.dim = pub.at("dim").get<size_t>();
  } catch (const ordered_json::exception& e) {
    throw VerfuError(ErrorCode::kIo, std::string("public key file: ") + e.what());
  }
  keys.paillier = PaillierKeysFromPrimes(ParseHex(sec, "paillier_p"), ParseHex(sec, "paillier_q"));
  if (keys.pk().n != ParseHex(pub, "paillier_n")) {
    throw VerfuError(ErrorCode::kIo, "secret key does not match the public modulus");
  }
  GroupDesc group{ParseHex(pub, "group_p"), ParseHex(pub, "group_q"),
                  pub.value("group_seed", std::string())};
  std::vector<BigUint> gens;
  for (const auto& g : pub.at("lhh_generators")) {
    BigUint x;
    if (!g.is_string() || x.set_str(g.get<std::string>(), 16) != 0) {
      throw VerfuError(ErrorCode::kIo, "malformed LHH generator");
    }
    gens.push_back(std::move(x));
  }
  keys.lhh = LhhParamsFromGenerators(group, std::move(gens));
  keys.com = ComParamsFromGenerators(group, ParseHex(pub, "com_g"), ParseHex(pub, "com_h"));
  if (std::filesystem::exists(dir / kTrapdoorFile)) {
    keys.trapdoor = Trapdoor{ParseHex(ReadJson(dir / kTrapdoorFile), "alpha")};
  }
  return keys;
}

}  // namespace verfu
