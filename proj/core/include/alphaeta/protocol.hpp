#pragma once

#include <vector>

#include "alphaeta/keystream.hpp"

namespace alphaeta {

/// Per-symbol record of one transmission. j_received is NaN until a channel
/// fills it in.
struct SymbolTrace {
    int k = 0;               // basis index in [0, M/2)
    Bit b = 0;               // message bit
    int j = 0;               // sent symbol index in [0, M)
    double j_received = -1.0; // noisy measurement in [0, M), < 0 when unset
};

/// j = ((k mod 2) XOR b) * M/2 + k. Bijection from (k, b) onto [0, M).
int encode_symbol(int k, Bit b, int M);

/// Keyed decoder: signal bit is 0 when j_received lies in the half-plane of
/// k (circular distance < M/4; the tie d == M/4 goes to the other branch),
/// message bit is signal XOR (k mod 2).
Bit bob_decode(int k, double j_received, int M);

/// Keyless decoder: round to the nearest symbol r, then invert the encoding
/// as floor(2r/M) XOR (r mod 2). Exact on noiseless integers; a one-symbol
/// rounding error usually flips the result.
Bit eve_naive_decode(double j_received, int M);

/// Circular distance on the M-symbol circle, in [0, M/2].
double circular_distance(double a, double b, int M);

/// Round half-up to the nearest integer symbol, reduced mod M.
int round_symbol(double j_received, int M);

/// Run protocol steps 2-3 over the whole message; j_received left unset.
std::vector<SymbolTrace> encode_message(const SecretKey& key, const std::vector<int>& taps,
                                        const BitVec& message, int M);

inline Bit additive_encrypt(Bit key_bit, Bit b) { return key_bit ^ b; }
inline Bit additive_decrypt(Bit key_bit, Bit c) { return key_bit ^ c; }

/// XOR the message with the LFSR keystream (the comparison cipher).
BitVec additive_encrypt_message(const SecretKey& key, const std::vector<int>& taps,
                                const BitVec& message);

} // namespace alphaeta
