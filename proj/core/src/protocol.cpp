#include "alphaeta/protocol.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace alphaeta {

int encode_symbol(int k, Bit b, int M) {
    if (M < 4 || !is_power_of_two(static_cast<std::uint64_t>(M)))
        throw std::invalid_argument("M must be a power of two >= 4, got " + std::to_string(M));
    if (k < 0 || k >= M / 2)
        throw std::invalid_argument("basis index " + std::to_string(k) + " outside [0, " +
                                    std::to_string(M / 2) + ")");
    const int signal = (k & 1) ^ static_cast<int>(b);
    return signal * (M / 2) + k;
}

double circular_distance(double a, double b, int M) {
    double d = std::fmod(std::fabs(a - b), static_cast<double>(M));
    return std::min(d, static_cast<double>(M) - d);
}

Bit bob_decode(int k, double j_received, int M) {
    const double d = circular_distance(j_received, static_cast<double>(k), M);
    const Bit signal = d < static_cast<double>(M) / 4.0 ? 0 : 1;
    return signal ^ static_cast<Bit>(k & 1);
}

int round_symbol(double j_received, int M) {
    const long long r = static_cast<long long>(std::floor(j_received + 0.5));
    return static_cast<int>(((r % M) + M) % M);
}

Bit eve_naive_decode(double j_received, int M) {
    const int r = round_symbol(j_received, M);
    const Bit signal = static_cast<Bit>((2 * r) / M); // floor(2r/M), r < M
    return signal ^ static_cast<Bit>(r & 1);
}

std::vector<SymbolTrace> encode_message(const SecretKey& key, const std::vector<int>& taps,
                                        const BitVec& message, int M) {
    std::vector<SymbolTrace> traces;
    traces.reserve(message.size());
    KeystreamGenerator gen(key, taps);
    for (Bit b : message) {
        SymbolTrace t;
        t.k = gen.next_basis(M).value;
        t.b = b;
        t.j = encode_symbol(t.k, b, M);
        traces.push_back(t);
    }
    return traces;
}

BitVec additive_encrypt_message(const SecretKey& key, const std::vector<int>& taps,
                                const BitVec& message) {
    KeystreamGenerator gen(key, taps);
    BitVec out(message.size());
    for (std::size_t q = 0; q < message.size(); ++q)
        out[q] = additive_encrypt(gen.next_bit(), message[q]);
    return out;
}

} // namespace alphaeta
