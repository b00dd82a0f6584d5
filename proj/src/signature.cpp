#include "qslide/signature.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qslide {

namespace {

long long pow2(int k) { return 1LL << k; }

// prefix form: sum of first k sorted entries >= 2^k - 1 for all k
bool prefix_condition(const std::vector<long long>& sorted) {
    long long sum = 0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        sum += sorted[k];
        if (sum < pow2(static_cast<int>(k) + 1) - 1) return false;
    }
    return true;
}

// equivalent suffix form: sum of entries after position k <= 2^k (2^(n-k) - 1)
bool suffix_condition(const std::vector<long long>& sorted) {
    int n = static_cast<int>(sorted.size());
    long long suffix = 0;
    for (int k = n - 1; k >= 1; --k) {
        suffix += sorted[k];
        if (suffix > pow2(k) * (pow2(n - k) - 1)) return false;
    }
    return true;
}

}  // namespace

bool is_signature(const std::vector<long long>& t) {
    int n = static_cast<int>(t.size());
    if (n < 1 || n > 25) return false;
    long long sum = 0;
    for (long long a : t) {
        if (a < 1 || a > pow2(n - 1)) return false;
        sum += a;
    }
    if (sum != pow2(n) - 1) return false;
    std::vector<long long> sorted = t;
    std::sort(sorted.begin(), sorted.end());
    bool prefix = prefix_condition(sorted);
    bool suffix = suffix_condition(sorted);
    if (prefix != suffix)
        throw std::logic_error("prefix/suffix characterisations disagree");  // unreachable
    return prefix;
}

bool is_signature(const Signature& t) {
    return is_signature(std::vector<long long>(t.begin(), t.end()));
}

void require_signature(const Signature& s) {
    if (!is_signature(s)) throw std::invalid_argument("not a signature: " + signature_to_string(s));
}

long long excess(const Signature& s, int k) {
    int n = static_cast<int>(s.size());
    if (k < 1 || k > n) throw std::out_of_range("excess index out of range");
    std::vector<long long> sorted(s.begin(), s.end());
    std::sort(sorted.begin(), sorted.end());
    long long sum = std::accumulate(sorted.begin(), sorted.begin() + k, 0LL);
    return sum - (pow2(k) - 1);
}

std::vector<std::uint32_t> reducing_sets(const Signature& s) {
    int n = static_cast<int>(s.size());
    if (n > 20) throw std::invalid_argument("reducing_sets supports n <= 20");
    require_signature(s);
    std::vector<std::uint32_t> out;
    // combinations of a fixed size in lexicographic element order
    std::vector<int> pick;
    auto rec = [&](auto&& self, int r, int next, long long sum, long long target,
                   std::uint32_t mask) -> void {
        if (static_cast<int>(pick.size()) == r) {
            if (sum == target) out.push_back(mask);
            return;
        }
        int need = r - static_cast<int>(pick.size());
        for (int i = next; i + need <= n; ++i) {
            long long ns = sum + s[i];
            if (ns + (need - 1) > target) continue;  // entries are >= 1
            pick.push_back(i);
            self(self, r, i + 1, ns, target, mask | (std::uint32_t{1} << i));
            pick.pop_back();
        }
    };
    for (int r = 1; r < n; ++r) rec(rec, r, 0, 0, pow2(r) - 1, 0);
    return out;
}

std::string to_string(SignatureKind k) {
    switch (k) {
        case SignatureKind::Irreducible: return "irreducible";
        case SignatureKind::QuasiIrreducible: return "quasi-irreducible";
        case SignatureKind::StrictlyReducible: return "strictly-reducible";
    }
    return "?";
}

namespace {

// least s (1-indexed) with excess zero at every k in [s, n]
int unsaturated_length(const std::vector<long long>& sorted) {
    int n = static_cast<int>(sorted.size());
    long long sum = std::accumulate(sorted.begin(), sorted.end(), 0LL);
    int s = n;
    for (int k = n; k >= 1; --k) {
        if (sum - (pow2(k) - 1) != 0) break;
        s = k;
        sum -= sorted[k - 1];
    }
    return s;
}

bool has_reducing_set(const Signature& s) {
    // an ordered signature reduces iff some proper prefix of the sorted form
    // hits the bound exactly
    int n = static_cast<int>(s.size());
    std::vector<long long> sorted(s.begin(), s.end());
    std::sort(sorted.begin(), sorted.end());
    long long sum = 0;
    for (int k = 1; k < n; ++k) {
        sum += sorted[k - 1];
        if (sum == pow2(k) - 1) return true;
    }
    return false;
}

}  // namespace

UnsatSelection unsaturated_selection(const Signature& s) {
    require_signature(s);
    int n = static_cast<int>(s.size());
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return s[a] < s[b]; });
    std::vector<long long> sorted(n);
    for (int i = 0; i < n; ++i) sorted[i] = s[idx[i]];
    int len = unsaturated_length(sorted);

    UnsatSelection sel;
    sel.indices.assign(idx.begin(), idx.begin() + len);
    std::sort(sel.indices.begin(), sel.indices.end());
    for (int i : sel.indices) sel.part.push_back(s[i]);

    // the textual rule "entries below 2^(s-1)" picks the same indices except
    // when s = 1 (then the single selected entry equals the threshold)
    long long threshold = pow2(len - 1);
    std::vector<int> by_threshold;
    for (int i = 0; i < n; ++i)
        if (s[i] < threshold) by_threshold.push_back(i);
    sel.threshold_mismatch = by_threshold != sel.indices;
    return sel;
}

Signature unsaturated_part(const Signature& s) { return unsaturated_selection(s).part; }

Classification classify(const Signature& s) {
    require_signature(s);
    int n = static_cast<int>(s.size());
    std::vector<long long> sorted(s.begin(), s.end());
    std::sort(sorted.begin(), sorted.end());

    Classification c;
    c.unsaturated_len = unsaturated_length(sorted);
    if (c.unsaturated_len < n) c.saturated_above = c.unsaturated_len;

    bool super = n >= 2;
    for (int i = 0; i < n && super; ++i) super = sorted[i] == pow2(i);
    c.supersaturated = super;

    if (!has_reducing_set(s)) {
        c.kind = SignatureKind::Irreducible;
    } else {
        Signature unsat = unsaturated_part(s);
        c.kind = has_reducing_set(unsat) ? SignatureKind::StrictlyReducible
                                         : SignatureKind::QuasiIrreducible;
    }
    return c;
}

std::vector<Signature> enumerate_ordered_signatures(int n) {
    if (n < 1 || n > 12) throw std::invalid_argument("enumerate_ordered_signatures: n in [1,12]");
    std::vector<Signature> out;
    Signature cur(n);
    long long total = pow2(n) - 1;
    long long cap = pow2(n - 1);
    auto rec = [&](auto&& self, int pos, long long sum, long long prev) -> void {
        int remaining = n - pos;
        if (remaining == 0) {
            if (sum == total) out.push_back(cur);
            return;
        }
        for (long long a = prev; a <= cap; ++a) {
            long long ns = sum + a;
            if (ns < pow2(pos + 1) - 1) continue;                 // prefix bound
            if (ns + (remaining - 1) * cap < total) continue;     // cannot reach the total
            if (ns + (remaining - 1) * a > total) break;          // nondecreasing overshoot
            cur[pos] = static_cast<int>(a);
            self(self, pos + 1, ns, a);
        }
    };
    rec(rec, 0, 0, 1);
    return out;
}

Signature sorted_signature(const Signature& s) {
    Signature out = s;
    std::sort(out.begin(), out.end());
    return out;
}

std::string signature_to_string(const Signature& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(s[i]);
    }
    return out;
}

Signature parse_signature(const std::string& text) {
    Signature out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        long long v;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad signature entry: '" + item + "'");
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (used != item.size()) throw std::invalid_argument("bad signature entry: '" + item + "'");
        if (v < -(1LL << 30) || v > (1LL << 30))
            throw std::invalid_argument("signature entry out of range: " + item);
        out.push_back(static_cast<int>(v));
    }
    if (out.empty()) throw std::invalid_argument("empty signature");
    return out;
}

}  // namespace qslide
