#include "shuffle/paillier.hpp"

#include "shuffle/errors.hpp"

namespace shuffle {

namespace {

// Miller-Rabin rounds; error probability <= 4^-40 = 2^-80.
constexpr int kPrimalityRounds = 40;

bool is_probable_prime(const Bigint& v) {
  return mpz_probab_prime_p(v.get_mpz_t(), kPrimalityRounds) != 0;
}

// Uniform prime with the top two bits set, so the product of two such
// primes has exactly twice their bit length.
Bigint random_prime(unsigned bits, RandomSource& rng) {
  for (;;) {
    Bigint candidate = rng.uniform_bits(bits);
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), bits - 2);
    mpz_setbit(candidate.get_mpz_t(), 0);
    if (is_probable_prime(candidate)) return candidate;
  }
}

Bigint powm(const Bigint& base, const Bigint& exp, const Bigint& mod) {
  Bigint r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return r;
}

Bigint invert(const Bigint& v, const Bigint& mod) {
  Bigint r;
  if (mpz_invert(r.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t()) == 0) {
    throw RangeError("value not invertible");
  }
  return r;
}

// L(u) = (u - 1) / d, defined when u = 1 (mod d).
Bigint paillier_l(const Bigint& u, const Bigint& d) {
  Bigint num = u - 1;
  Bigint r;
  mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), d.get_mpz_t());
  return r;
}

KeyPair assemble(const Bigint& p, const Bigint& q, Instance instance) {
  Bigint n = p * q;
  Bigint n_sq = n * n;
  Bigint g = n + 1;

  Bigint lambda;
  {
    Bigint pm1 = p - 1, qm1 = q - 1;
    mpz_lcm(lambda.get_mpz_t(), pm1.get_mpz_t(), qm1.get_mpz_t());
  }
  Bigint mu = invert(paillier_l(powm(g, lambda, n_sq), n), n);

  SecretKey sk;
  sk.lambda = lambda;
  sk.mu = mu;
  sk.modulus = n;
  sk.instance = instance;
  sk.p = p;
  sk.q = q;
  sk.p_sq = p * p;
  sk.q_sq = q * q;
  sk.hp = invert(paillier_l(powm(g, p - 1, sk.p_sq), p), p);
  sk.hq = invert(paillier_l(powm(g, q - 1, sk.q_sq), q), q);
  sk.q_inv_mod_p = invert(q, p);
  sk.modulus_sq = n_sq;

  PublicKey pk;
  pk.modulus = n;
  pk.generator = g;
  pk.modulus_sq = n_sq;
  pk.instance = instance;

  return KeyPair{pk, sk};
}

void require_instance(Instance a, Instance b, const char* op) {
  if (a != b) {
    throw InstanceMismatchError(std::string(op) + ": instance mismatch (" +
                                instance_name(a) + " vs " + instance_name(b) +
                                ")");
  }
}

void require_valid_value(const PublicKey& pk, const Ciphertext& c,
                         const char* op) {
  require_instance(pk.instance, c.instance, op);
  if (c.value < 1 || c.value >= pk.modulus_sq) {
    throw RangeError(std::string(op) + ": ciphertext value out of range");
  }
}

}  // namespace

const char* instance_name(Instance instance) {
  return instance == Instance::cs1 ? "CS1" : "CS2";
}

KeyPair keygen(unsigned bits, Instance instance, RandomSource& rng) {
  if (bits < 16) throw RangeError("keygen: modulus must be at least 16 bits");
  if (bits % 2 != 0) throw RangeError("keygen: modulus bits must be even");

  const unsigned half = bits / 2;
  for (;;) {
    Bigint p = random_prime(half, rng);
    Bigint q = random_prime(half, rng);
    if (p == q) continue;
    Bigint n = p * q;
    if (bit_length(n) != bits) continue;
    Bigint phi = (p - 1) * (q - 1);
    Bigint gcd;
    mpz_gcd(gcd.get_mpz_t(), n.get_mpz_t(), phi.get_mpz_t());
    if (gcd != 1) continue;
    return assemble(p, q, instance);
  }
}

KeyPair keypair_from_primes(const Bigint& p, const Bigint& q,
                            Instance instance) {
  if (p == q) throw RangeError("keypair_from_primes: primes must differ");
  if (!is_probable_prime(p) || !is_probable_prime(q)) {
    throw RangeError("keypair_from_primes: inputs must be prime");
  }
  Bigint n = p * q;
  Bigint phi = (p - 1) * (q - 1);
  Bigint gcd;
  mpz_gcd(gcd.get_mpz_t(), n.get_mpz_t(), phi.get_mpz_t());
  if (gcd != 1) {
    throw RangeError("keypair_from_primes: modulus shares a factor with phi");
  }
  return assemble(p, q, instance);
}

Ciphertext encrypt(const PublicKey& pk, const Bigint& m, RandomSource& rng) {
  if (m < 0 || m >= pk.modulus) {
    throw RangeError("encrypt: plaintext outside [0, N)");
  }
  // Uniform unit nonce; resample until coprime to N.
  Bigint r;
  for (;;) {
    r = rng.uniform_below(pk.modulus);
    if (r == 0) continue;
    Bigint gcd;
    mpz_gcd(gcd.get_mpz_t(), r.get_mpz_t(), pk.modulus.get_mpz_t());
    if (gcd == 1) break;
  }
  // g = N + 1, so g^m = 1 + m*N (mod N^2).
  Bigint gm = (1 + m * pk.modulus) % pk.modulus_sq;
  Bigint c = (gm * powm(r, pk.modulus, pk.modulus_sq)) % pk.modulus_sq;
  return Ciphertext{c, pk.instance};
}

Bigint decrypt(const SecretKey& sk, const Ciphertext& c) {
  require_instance(sk.instance, c.instance, "decrypt");
  if (c.value < 1 || c.value >= sk.modulus_sq) {
    throw RangeError("decrypt: ciphertext value out of range");
  }
  {
    Bigint gcd;
    mpz_gcd(gcd.get_mpz_t(), c.value.get_mpz_t(), sk.modulus.get_mpz_t());
    if (gcd != 1) throw RangeError("decrypt: value is not a unit");
  }
  // CRT form: recover m mod p and m mod q with half-size exponentiations.
  Bigint mp = (paillier_l(powm(c.value % sk.p_sq, sk.p - 1, sk.p_sq), sk.p) *
               sk.hp) %
              sk.p;
  Bigint mq = (paillier_l(powm(c.value % sk.q_sq, sk.q - 1, sk.q_sq), sk.q) *
               sk.hq) %
              sk.q;
  Bigint diff = ((mp - mq) * sk.q_inv_mod_p) % sk.p;
  if (diff < 0) diff += sk.p;
  return mq + sk.q * diff;
}

Ciphertext hom_add(const PublicKey& pk, const Ciphertext& a,
                   const Ciphertext& b) {
  require_valid_value(pk, a, "hom_add");
  require_valid_value(pk, b, "hom_add");
  return Ciphertext{(a.value * b.value) % pk.modulus_sq, pk.instance};
}

Ciphertext hom_scale(const PublicKey& pk, const Ciphertext& c,
                     const Bigint& k) {
  require_valid_value(pk, c, "hom_scale");
  if (k < 0 || k >= pk.modulus) {
    throw RangeError("hom_scale: scalar outside [0, N)");
  }
  return Ciphertext{powm(c.value, k, pk.modulus_sq), pk.instance};
}

Ciphertext hom_negate(const PublicKey& pk, const Ciphertext& c) {
  return hom_scale(pk, c, pk.modulus - 1);
}

Ciphertext rerandomize(const PublicKey& pk, const Ciphertext& c,
                       RandomSource& rng) {
  return hom_add(pk, c, encrypt(pk, 0, rng));
}

void append_ciphertext(std::vector<std::uint8_t>& out, const Ciphertext& c,
                       std::size_t value_width) {
  out.push_back(static_cast<std::uint8_t>(c.instance));
  append_integer_padded(out, c.value, value_width);
}

Ciphertext parse_ciphertext(ByteReader& reader) {
  std::uint8_t tag = reader.u8();
  if (tag != static_cast<std::uint8_t>(Instance::cs1) &&
      tag != static_cast<std::uint8_t>(Instance::cs2)) {
    throw MessageError("parse_ciphertext: bad instance tag");
  }
  return Ciphertext{reader.integer(), static_cast<Instance>(tag)};
}

}  // namespace shuffle
