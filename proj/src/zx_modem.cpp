#include "zx/zx_modem.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace zx {

namespace {

struct ModemError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

int gray_code(int i) { return i ^ (i >> 1); }

int gray_inverse(int g) {
    int b = 0;
    for (; g; g >>= 1) b ^= g;
    return b;
}

// Super-symbol order for m_rx = 2 (8 used two-symbol combinations followed by
// the unused ninth).
constexpr std::array<std::array<int, 2>, 9> kSuperPairs = {{
    {1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}, {3, 2}, {3, 1}, {3, 3}, {2, 3},
}};

}  // namespace

ZxAlphabet ZxAlphabet::make(int m_rx) {
    if (m_rx < 1) throw ModemError("m_rx must be positive");
    return ZxAlphabet{m_rx, m_rx + 1};
}

int ZxAlphabet::crossing_interval(int symbol) const {
    if (symbol < 1 || symbol > size) throw ModemError("invalid symbol id");
    if (symbol == 1) return 0;
    return m_rx - (symbol - 2);
}

std::vector<int> ZxAlphabet::codeword(int symbol, int prev_level) const {
    const int interval = crossing_interval(symbol);
    std::vector<int> cw(static_cast<std::size_t>(m_rx), prev_level);
    if (interval > 0)
        for (int k = interval - 1; k < m_rx; ++k) cw[static_cast<std::size_t>(k)] = -prev_level;
    return cw;
}

std::string ZxAlphabet::gray_label(int symbol) const {
    if (symbol < 1 || symbol > size) throw ModemError("invalid symbol id");
    int width = 0;
    while ((1 << width) < size) ++width;
    if ((1 << width) != size) throw ModemError("gray labels require a power-of-two alphabet");
    const int g = gray_code(symbol - 1);
    std::string label(static_cast<std::size_t>(width), '0');
    for (int b = 0; b < width; ++b)
        if (g & (1 << (width - 1 - b))) label[static_cast<std::size_t>(b)] = '1';
    return label;
}

ZxFrame forward_map(const std::vector<int>& symbols, int pilot, const ZxAlphabet& alphabet) {
    if (symbols.empty()) throw ModemError("symbol sequence must be nonempty");
    if (pilot != 1 && pilot != -1) throw ModemError("pilot must be +-1");
    ZxFrame frame;
    frame.pilot = pilot;
    frame.symbols = symbols;
    frame.samples.reserve(symbols.size() * static_cast<std::size_t>(alphabet.m_rx));
    int level = pilot;
    for (int s : symbols) {
        const auto cw = alphabet.codeword(s, level);
        frame.samples.insert(frame.samples.end(), cw.begin(), cw.end());
        level = cw.back();
    }
    return frame;
}

int hamming_detect(std::span<const int> segment, int prev_level,
                   const ZxAlphabet& alphabet) {
    if (static_cast<int>(segment.size()) != alphabet.m_rx + 1)
        throw ModemError("segment length must be m_rx + 1");
    int best_sym = 1;
    int best_dist = std::numeric_limits<int>::max();
    for (int s = 1; s <= alphabet.size; ++s) {
        const auto cw = alphabet.codeword(s, prev_level);
        int dist = std::abs(segment[0] - prev_level) / 2;
        for (int k = 0; k < alphabet.m_rx; ++k)
            dist += std::abs(segment[static_cast<std::size_t>(k + 1)] -
                             cw[static_cast<std::size_t>(k)]) / 2;
        if (dist < best_dist) {
            best_dist = dist;
            best_sym = s;
        }
    }
    return best_sym;
}

std::vector<int> detect_sequence(std::span<const int> received_signs,
                                 const ZxAlphabet& alphabet) {
    const int m = alphabet.m_rx;
    if (received_signs.size() % static_cast<std::size_t>(m) != 1)
        throw ModemError("received length must be N*m_rx + 1");
    const std::size_t n = (received_signs.size() - 1) / static_cast<std::size_t>(m);
    std::vector<int> symbols;
    symbols.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto segment = received_signs.subspan(j * static_cast<std::size_t>(m),
                                                    static_cast<std::size_t>(m) + 1);
        symbols.push_back(hamming_detect(segment, segment[0], alphabet));
    }
    return symbols;
}

double bits_per_symbol(int m_rx) {
    if (m_rx == 3) return 2.0;
    if (m_rx == 2) return 1.5;
    throw ModemError("bits_per_symbol defined for m_rx in {2, 3}");
}

std::vector<int> gray_encode(const std::vector<int>& bits, const ZxAlphabet& alphabet) {
    for (int b : bits)
        if (b != 0 && b != 1) throw ModemError("bits must be 0/1");
    std::vector<int> symbols;
    if (alphabet.m_rx == 3) {
        if (bits.size() % 2 != 0) throw ModemError("bit length must be even for m_rx = 3");
        for (std::size_t i = 0; i < bits.size(); i += 2) {
            const int g = 2 * bits[i] + bits[i + 1];
            symbols.push_back(gray_inverse(g) + 1);
        }
    } else if (alphabet.m_rx == 2) {
        if (bits.size() % 3 != 0)
            throw ModemError("bit length must be divisible by 3 for m_rx = 2");
        for (std::size_t i = 0; i < bits.size(); i += 3) {
            const int g = 4 * bits[i] + 2 * bits[i + 1] + bits[i + 2];
            const int super = gray_inverse(g);  // 0..7 in table order
            symbols.push_back(kSuperPairs[static_cast<std::size_t>(super)][0]);
            symbols.push_back(kSuperPairs[static_cast<std::size_t>(super)][1]);
        }
    } else {
        throw ModemError("gray coding defined for m_rx in {2, 3}");
    }
    return symbols;
}

std::vector<int> gray_decode(const std::vector<int>& symbols, const ZxAlphabet& alphabet) {
    std::vector<int> bits;
    if (alphabet.m_rx == 3) {
        for (int s : symbols) {
            if (s < 1 || s > 4) throw ModemError("invalid symbol id");
            const int g = gray_code(s - 1);
            bits.push_back((g >> 1) & 1);
            bits.push_back(g & 1);
        }
    } else if (alphabet.m_rx == 2) {
        if (symbols.size() % 2 != 0)
            throw ModemError("symbol count must be even for m_rx = 2");
        static const BlockCodebook book = BlockCodebook::make(2, 2, ZxAlphabet::make(2));
        for (std::size_t i = 0; i < symbols.size(); i += 2) {
            int super = 0;
            for (std::size_t k = 0; k < kSuperPairs.size(); ++k) {
                if (kSuperPairs[k][0] == symbols[i] && kSuperPairs[k][1] == symbols[i + 1]) {
                    super = static_cast<int>(k) + 1;
                    break;
                }
            }
            if (super == 0) throw ModemError("invalid symbol pair");
            // the unused ninth combination decodes as its nearest used neighbor
            const int used = book.remap[static_cast<std::size_t>(super - 1)];
            const int g = gray_code(used - 1);
            bits.push_back((g >> 2) & 1);
            bits.push_back((g >> 1) & 1);
            bits.push_back(g & 1);
        }
    } else {
        throw ModemError("gray coding defined for m_rx in {2, 3}");
    }
    return bits;
}

BlockCodebook BlockCodebook::make(int m_rx, int block_len, const ZxAlphabet& alphabet) {
    if (alphabet.m_rx != m_rx) throw ModemError("alphabet does not match m_rx");
    BlockCodebook book;
    book.m_rx = m_rx;
    book.block_len = block_len;

    auto concat = [&](std::span<const int> tuple) {
        std::vector<int> cw{1};
        int level = 1;
        for (int s : tuple) {
            const auto part = alphabet.codeword(s, level);
            cw.insert(cw.end(), part.begin(), part.end());
            level = part.back();
        }
        return cw;
    };

    if (block_len == 1) {
        book.num_used = alphabet.size;
        for (int s = 1; s <= alphabet.size; ++s) {
            const std::array<int, 1> tuple{s};
            book.codewords.push_back(concat(tuple));
            book.symbol_tuples.push_back({s});
            book.remap.push_back(s);
        }
        return book;
    }
    if (m_rx == 2 && block_len == 2) {
        book.num_used = 8;
        for (const auto& pair : kSuperPairs) {
            book.codewords.push_back(concat(pair));
            book.symbol_tuples.push_back({pair[0], pair[1]});
        }
        for (int i = 0; i < 9; ++i) {
            if (i < 8) {
                book.remap.push_back(i + 1);
                continue;
            }
            // nearest used codeword by Hamming distance, tie to the lowest index
            int best = 1, best_dist = std::numeric_limits<int>::max();
            for (int j = 0; j < 8; ++j) {
                int dist = 0;
                for (std::size_t k = 0; k < book.codewords[8].size(); ++k)
                    dist += std::abs(book.codewords[8][k] -
                                     book.codewords[static_cast<std::size_t>(j)][k]) / 2;
                if (dist < best_dist) {
                    best_dist = dist;
                    best = j + 1;
                }
            }
            book.remap.push_back(best);
        }
        return book;
    }
    throw ModemError("unsupported block codebook configuration");
}

int BlockCodebook::detect(std::span<const int> block) const {
    if (static_cast<int>(block.size()) != dimension())
        throw ModemError("block length must be m_rx * block_len + 1");
    const int ref = block[0];
    int best = 0, best_dist = std::numeric_limits<int>::max();
    for (std::size_t c = 0; c < codewords.size(); ++c) {
        int dist = 0;
        for (std::size_t k = 0; k < block.size(); ++k)
            dist += std::abs(block[k] - ref * codewords[c][k]) / 2;
        if (dist < best_dist) {
            best_dist = dist;
            best = static_cast<int>(c);
        }
    }
    return remap[static_cast<std::size_t>(best)];
}

}  // namespace zx
