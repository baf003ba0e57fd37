#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "zx/system_config.hpp"

namespace zx {

/// Symbol alphabet of the time-instance zero-crossing modulation.
/// Symbol ids run 1..R with R = M_Rx + 1: id 1 carries no zero-crossing,
/// id 2 a crossing in interval M_Rx, ..., id R a crossing in interval 1.
struct ZxAlphabet {
    int m_rx = 0;
    int size = 0;  // R = m_rx + 1

    static ZxAlphabet make(int m_rx);

    /// 0 for the no-crossing symbol, otherwise the crossing interval (1-based).
    int crossing_interval(int symbol) const;

    /// The M_Rx-sample codeword for a symbol given the preceding level.
    std::vector<int> codeword(int symbol, int prev_level) const;

    /// Bit label of a symbol under the reflected Gray assignment over the
    /// alphabet order (defined when R is a power of two).
    std::string gray_label(int symbol) const;
};

/// One modulated frame: pilot level plus N * M_Rx data samples.
struct ZxFrame {
    int pilot = 1;
    std::vector<int> samples;   // +-1, length N * M_Rx
    std::vector<int> symbols;   // the N source symbol ids
};

/// Maps a symbol sequence to its +-1 sample sequence, threading the last
/// emitted level across codeword boundaries starting from the pilot.
ZxFrame forward_map(const std::vector<int>& symbols, int pilot, const ZxAlphabet& alphabet);

/// Hamming-distance detection of one segment [rho_prev, z_1..z_MRx].
/// Candidates are the R codewords generated from prev_level; ties break to
/// the lowest symbol id.
int hamming_detect(std::span<const int> segment, int prev_level, const ZxAlphabet& alphabet);

/// Segments a received +-1 sequence (pilot first, length N*M_Rx + 1) and
/// detects each symbol, threading the received previous sample.
std::vector<int> detect_sequence(std::span<const int> received_signs, const ZxAlphabet& alphabet);

/// Gray bit coding. For M_Rx = 3: 2 bits per symbol. For M_Rx = 2: 3 bits
/// per 2-symbol super-symbol over the 8 used super-symbols.
std::vector<int> gray_encode(const std::vector<int>& bits, const ZxAlphabet& alphabet);
std::vector<int> gray_decode(const std::vector<int>& symbols, const ZxAlphabet& alphabet);

/// Bits carried per transmit symbol: 2 for M_Rx = 3, 1.5 for M_Rx = 2.
double bits_per_symbol(int m_rx);

/// Block-level codebook used to build detection regions: all valid
/// concatenations of block_len codewords with a leading +1 reference sample.
/// For m_rx = 2 the block is the 2-symbol super-symbol alphabet (8 used
/// combinations in table order plus the unused 9th, which detection remaps
/// to the nearest used codeword, ties to the lowest index).
struct BlockCodebook {
    int m_rx = 0;
    int block_len = 0;
    int num_used = 0;                                // m = 4 or 8
    std::vector<std::vector<int>> codewords;         // used + unused, length d each
    std::vector<int> remap;                          // codeword index -> used id (1-based)
    std::vector<std::vector<int>> symbol_tuples;     // per codeword, the block_len symbol ids

    int dimension() const { return m_rx * block_len + 1; }

    static BlockCodebook make(int m_rx, int block_len, const ZxAlphabet& alphabet);

    /// Joint Hamming detection of a full block (first entry is the reference
    /// sample); returns the used block-symbol id in 1..num_used.
    int detect(std::span<const int> block) const;
};

}  // namespace zx
