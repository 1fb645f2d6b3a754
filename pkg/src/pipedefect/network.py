"""Bi-LSTM sequence labeling network, implemented directly on numpy.

One set of gate equations serves both the single-vector API (lstm_step,
bilstm_forward) and the batched training path: all core functions
broadcast over leading dimensions.  Gate order inside the packed weight
matrices is [input, forget, output, candidate].
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import EmptySequence, NumericalError

UNK = "<unk>"

# Default dimensions of the tagging network.
WORD_DIM = 200
DICT_DIM = 100
HIDDEN_DIM = 300
N_TAGS = 4
N_DICT_FEATURES = 4  # none / defect / location / frequency


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


@dataclass
class LstmParams:
    wx: np.ndarray  # (input_dim, 4 * hidden)
    wh: np.ndarray  # (hidden, 4 * hidden)
    b: np.ndarray  # (4 * hidden,)

    @property
    def hidden_dim(self) -> int:
        return self.wh.shape[0]


@dataclass
class TaggerModel:
    vocab: list[str]  # vocab[0] == UNK
    word_emb: np.ndarray  # (|V|, word_dim)
    dict_emb: np.ndarray  # (N_DICT_FEATURES, dict_dim)
    fwd: LstmParams
    bwd: LstmParams
    out_w: np.ndarray  # (2 * hidden, N_TAGS)
    out_b: np.ndarray  # (N_TAGS,)
    rng_seed: int

    @property
    def input_dim(self) -> int:
        return self.word_emb.shape[1] + self.dict_emb.shape[1]

    @property
    def hidden_dim(self) -> int:
        return self.fwd.hidden_dim

    def token_index(self, normalized: str) -> int:
        try:
            return self._tok2idx[normalized]
        except AttributeError:
            self._tok2idx = {t: i for i, t in enumerate(self.vocab)}
            return self._tok2idx.get(normalized, 0)
        except KeyError:
            return 0

    def parameters(self) -> list[np.ndarray]:
        return [
            self.word_emb,
            self.dict_emb,
            self.fwd.wx,
            self.fwd.wh,
            self.fwd.b,
            self.bwd.wx,
            self.bwd.wh,
            self.bwd.b,
            self.out_w,
            self.out_b,
        ]

    def check_finite(self) -> None:
        for p in self.parameters():
            if not np.all(np.isfinite(p)):
                raise NumericalError("model contains non-finite parameters")


def init_model(
    vocab: list[str],
    seed: int,
    word_dim: int = WORD_DIM,
    dict_dim: int = DICT_DIM,
    hidden_dim: int = HIDDEN_DIM,
) -> TaggerModel:
    """Uniform [-0.1, 0.1] initialization from a seeded generator; biases
    start at zero."""
    if not vocab or vocab[0] != UNK:
        vocab = [UNK] + [t for t in vocab if t != UNK]
    rng = np.random.Generator(np.random.PCG64(seed))
    input_dim = word_dim + dict_dim

    def uni(*shape):
        return rng.uniform(-0.1, 0.1, size=shape)

    def gates(in_dim):
        return LstmParams(
            wx=uni(in_dim, 4 * hidden_dim),
            wh=uni(hidden_dim, 4 * hidden_dim),
            b=np.zeros(4 * hidden_dim),
        )

    return TaggerModel(
        vocab=list(vocab),
        word_emb=uni(len(vocab), word_dim),
        dict_emb=uni(N_DICT_FEATURES, dict_dim),
        fwd=gates(input_dim),
        bwd=gates(input_dim),
        out_w=uni(2 * hidden_dim, N_TAGS),
        out_b=np.zeros(N_TAGS),
        rng_seed=seed,
    )


def embed(token_index: int, dict_feature: int, model: TaggerModel) -> np.ndarray:
    """Concatenated word + dictionary-feature embedding row."""
    return np.concatenate([model.word_emb[token_index], model.dict_emb[dict_feature]])


def lstm_core(x, h_prev, c_prev, params: LstmParams):
    """Gate arithmetic; broadcasts over any leading batch dimensions."""
    hd = params.hidden_dim
    z = x @ params.wx + h_prev @ params.wh + params.b
    i = sigmoid(z[..., :hd])
    f = sigmoid(z[..., hd : 2 * hd])
    o = sigmoid(z[..., 2 * hd : 3 * hd])
    g = np.tanh(z[..., 3 * hd :])
    c = f * c_prev + i * g
    h = o * np.tanh(c)
    return h, c


def lstm_step(x, h_prev, c_prev, params: LstmParams):
    """One validated LSTM step over 1-d state vectors."""
    for arr in (params.wx, params.wh, params.b):
        if not np.all(np.isfinite(arr)):
            raise NumericalError("non-finite LSTM parameters")
    return lstm_core(np.asarray(x, dtype=float), np.asarray(h_prev, dtype=float),
                     np.asarray(c_prev, dtype=float), params)


def bilstm_forward(xs, model: TaggerModel) -> np.ndarray:
    """Per-position concatenation of forward and backward hidden states.

    xs: (T, input_dim). Returns (T, 2 * hidden).
    """
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 2 or xs.shape[0] == 0:
        raise EmptySequence("bilstm_forward requires a non-empty (T, D) sequence")
    hd = model.hidden_dim
    T = xs.shape[0]
    out = np.empty((T, 2 * hd))
    h = np.zeros(hd)
    c = np.zeros(hd)
    for t in range(T):
        h, c = lstm_core(xs[t], h, c, model.fwd)
        out[t, :hd] = h
    h = np.zeros(hd)
    c = np.zeros(hd)
    for t in range(T - 1, -1, -1):
        h, c = lstm_core(xs[t], h, c, model.bwd)
        out[t, hd:] = h
    return out


def sentence_logits(token_indices, dict_features, model: TaggerModel) -> np.ndarray:
    xs = np.concatenate(
        [model.word_emb[list(token_indices)], model.dict_emb[list(dict_features)]],
        axis=1,
    )
    hs = bilstm_forward(xs, model)
    return hs @ model.out_w + model.out_b


# ---------------------------------------------------------------------------
# model file container: text header + packed little-endian float64 payload
# ---------------------------------------------------------------------------

_MAGIC = b"PIPEDEFECT-TAGGER v1\n"


def save_model(model: TaggerModel, path) -> None:
    names = [
        "word_emb", "dict_emb",
        "fwd.wx", "fwd.wh", "fwd.b",
        "bwd.wx", "bwd.wh", "bwd.b",
        "out_w", "out_b",
    ]
    arrays = model.parameters()
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(f"seed {model.rng_seed}\n".encode())
        fh.write(f"vocab {len(model.vocab)}\n".encode())
        for tok in model.vocab:
            fh.write(tok.encode() + b"\n")
        for name, arr in zip(names, arrays):
            fh.write(f"matrix {name} {' '.join(str(s) for s in arr.shape)}\n".encode())
        fh.write(b"data\n")
        for arr in arrays:
            data = np.ascontiguousarray(arr, dtype="<f8").tobytes()
            fh.write(struct.pack("<Q", len(data)))
            fh.write(data)


def load_model(path) -> TaggerModel:
    with open(path, "rb") as fh:
        if fh.readline() != _MAGIC:
            raise NumericalError(f"{path}: not a tagger model file")
        seed = int(fh.readline().decode().split()[1])
        n_vocab = int(fh.readline().decode().split()[1])
        vocab = [fh.readline().decode().rstrip("\n") for _ in range(n_vocab)]
        shapes = []
        while True:
            line = fh.readline().decode().rstrip("\n")
            if line == "data":
                break
            parts = line.split()
            shapes.append((parts[1], tuple(int(x) for x in parts[2:])))
        arrays = []
        for _, shape in shapes:
            (nbytes,) = struct.unpack("<Q", fh.read(8))
            arrays.append(np.frombuffer(fh.read(nbytes), dtype="<f8").reshape(shape).copy())
    (word_emb, dict_emb, fwx, fwh, fb, bwx, bwh, bb, out_w, out_b) = arrays
    return TaggerModel(
        vocab=vocab,
        word_emb=word_emb,
        dict_emb=dict_emb,
        fwd=LstmParams(fwx, fwh, fb),
        bwd=LstmParams(bwx, bwh, bb),
        out_w=out_w,
        out_b=out_b,
        rng_seed=seed,
    )
