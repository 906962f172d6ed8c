// Copyright (c) 2026 zkTI contributors
// SPDX-License-Identifier: Apache-2.0

// Canonical "zkb1" bundle container: little-endian framing, 32-byte
// big-endian field elements, fixed section order (header, public inputs,
// constraints, optional witness), and a trailing sponge checksum over all
// preceding bytes. Byte-deterministic by construction.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zkti/protocol.hpp"

namespace zkti {

/// Thrown on malformed containers; `code` is a stable short reason.
class BundleFormatError : public std::runtime_error {
public:
    BundleFormatError(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

std::vector<std::uint8_t> export_bundle(const ProofBundle& bundle, bool include_witness);
ProofBundle import_bundle(std::span<const std::uint8_t> bytes, const PublicParams& pp);

void write_bundle_file(const std::string& path, const ProofBundle& bundle, bool include_witness);
ProofBundle read_bundle_file(const std::string& path, const PublicParams& pp);

}  // namespace zkti
