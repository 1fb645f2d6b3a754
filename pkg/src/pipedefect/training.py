"""Training the Bi-LSTM tagger: batched BPTT, masked padding, Adam.

The batched forward/backward reuses the same gate arithmetic as the
inference path (network.lstm_core); padded positions are frozen by the
mask so they contribute neither to the recurrence nor to the loss.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import Sentence
from .errors import AlignmentError
from .lexicon import Lexicon
from .network import (
    DICT_DIM,
    HIDDEN_DIM,
    N_TAGS,
    UNK,
    WORD_DIM,
    LstmParams,
    TaggerModel,
    init_model,
)
from .tagger import Tag, dict_features


@dataclass
class TrainingConfig:
    word_dim: int = WORD_DIM
    dict_dim: int = DICT_DIM
    hidden_dim: int = HIDDEN_DIM
    learning_rate: float = 0.005
    epochs: int = 10
    batch_size: int = 100
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    grad_clip: float | None = None


@dataclass
class EncodedSentence:
    token_ids: list[int]
    dict_feats: list[int]
    tag_ids: list[int]


@dataclass
class TrainingResult:
    model: TaggerModel
    epoch_losses: list[float] = field(default_factory=list)


def build_vocab(corpus: list[tuple[Sentence, list[Tag]]]) -> list[str]:
    words = sorted({tok.normalized for sent, _ in corpus for tok in sent.tokens})
    return [UNK] + words


def encode_corpus(
    corpus: list[tuple[Sentence, list[Tag]]], lexicon: Lexicon, model: TaggerModel
) -> list[EncodedSentence]:
    encoded = []
    for sent, tags in corpus:
        if len(tags) != len(sent.tokens):
            raise AlignmentError(
                f"{len(tags)} tags for {len(sent.tokens)} tokens in {sent.text!r}"
            )
        encoded.append(
            EncodedSentence(
                token_ids=[model.token_index(t.normalized) for t in sent.tokens],
                dict_feats=dict_features(sent, lexicon),
                tag_ids=[int(t) for t in tags],
            )
        )
    return encoded


def pad_batch(batch: list[EncodedSentence]):
    """Pad to the longest sentence; returns int arrays plus a float mask."""
    B = len(batch)
    T = max(len(s.token_ids) for s in batch)
    ids = np.zeros((B, T), dtype=np.int64)
    feats = np.zeros((B, T), dtype=np.int64)
    tags = np.zeros((B, T), dtype=np.int64)
    mask = np.zeros((B, T))
    for k, s in enumerate(batch):
        n = len(s.token_ids)
        ids[k, :n] = s.token_ids
        feats[k, :n] = s.dict_feats
        tags[k, :n] = s.tag_ids
        mask[k, :n] = 1.0
    return ids, feats, tags, mask


def _run_direction(X, mask, params: LstmParams, reverse: bool):
    """Masked recurrence over time; returns per-step cache for backprop."""
    B, T, _ = X.shape
    hd = params.hidden_dim
    H = np.zeros((B, T, hd))
    h = np.zeros((B, hd))
    c = np.zeros((B, hd))
    cache = []
    order = range(T - 1, -1, -1) if reverse else range(T)
    for t in order:
        m = mask[:, t : t + 1]
        h_prev, c_prev = h, c
        hd_ = params.hidden_dim
        z = X[:, t] @ params.wx + h_prev @ params.wh + params.b
        i = 1.0 / (1.0 + np.exp(-z[:, :hd_]))
        f = 1.0 / (1.0 + np.exp(-z[:, hd_ : 2 * hd_]))
        o = 1.0 / (1.0 + np.exp(-z[:, 2 * hd_ : 3 * hd_]))
        g = np.tanh(z[:, 3 * hd_ :])
        c_raw = f * c_prev + i * g
        tanh_c = np.tanh(c_raw)
        h_raw = o * tanh_c
        h = m * h_raw + (1.0 - m) * h_prev
        c = m * c_raw + (1.0 - m) * c_prev
        H[:, t] = h
        cache.append((t, i, f, o, g, c_raw, tanh_c, h_prev, c_prev, m))
    return H, cache


def _backprop_direction(X, dH, params: LstmParams, cache):
    """Gradient of the masked recurrence; returns (dX, dWx, dWh, db)."""
    B, T, D = X.shape
    hd = params.hidden_dim
    dX = np.zeros_like(X)
    dWx = np.zeros_like(params.wx)
    dWh = np.zeros_like(params.wh)
    db = np.zeros_like(params.b)
    dh_next = np.zeros((B, hd))
    dc_next = np.zeros((B, hd))
    for t, i, f, o, g, c_raw, tanh_c, h_prev, c_prev, m in reversed(cache):
        dh_total = dH[:, t] + dh_next
        dc_total = dc_next
        dh_raw = m * dh_total
        dh_prev = (1.0 - m) * dh_total
        dc_raw = m * dc_total
        dc_prev = (1.0 - m) * dc_total
        do = dh_raw * tanh_c
        dc_raw = dc_raw + dh_raw * o * (1.0 - tanh_c**2)
        df = dc_raw * c_prev
        di = dc_raw * g
        dg = dc_raw * i
        dc_prev = dc_prev + dc_raw * f
        dz = np.concatenate(
            [
                di * i * (1.0 - i),
                df * f * (1.0 - f),
                do * o * (1.0 - o),
                dg * (1.0 - g**2),
            ],
            axis=1,
        )
        dWx += X[:, t].T @ dz
        dWh += h_prev.T @ dz
        db += dz.sum(axis=0)
        dX[:, t] = dz @ params.wx.T
        dh_next = dz @ params.wh.T + dh_prev
        dc_next = dc_prev
    return dX, dWx, dWh, db


def batch_loss_and_grads(model: TaggerModel, ids, feats, tags, mask, compute_grads=True):
    """Mean per-token cross-entropy over real (unmasked) tokens."""
    B, T = ids.shape
    hd = model.hidden_dim
    Xw = model.word_emb[ids]  # (B, T, word_dim)
    Xd = model.dict_emb[feats]  # (B, T, dict_dim)
    X = np.concatenate([Xw, Xd], axis=2)
    Hf, cache_f = _run_direction(X, mask, model.fwd, reverse=False)
    Hb, cache_b = _run_direction(X, mask, model.bwd, reverse=True)
    H = np.concatenate([Hf, Hb], axis=2)
    logits = H @ model.out_w + model.out_b
    logits = logits - logits.max(axis=2, keepdims=True)
    exp = np.exp(logits)
    probs = exp / exp.sum(axis=2, keepdims=True)
    n_real = mask.sum()
    gold = np.eye(N_TAGS)[tags]
    logp = np.log(np.clip((probs * gold).sum(axis=2), 1e-300, None))
    loss = -(logp * mask).sum() / n_real
    if not compute_grads:
        return loss, None
    dlogits = (probs - gold) * mask[:, :, None] / n_real
    flat_H = H.reshape(B * T, 2 * hd)
    flat_dlogits = dlogits.reshape(B * T, N_TAGS)
    d_out_w = flat_H.T @ flat_dlogits
    d_out_b = flat_dlogits.sum(axis=0)
    dH = dlogits @ model.out_w.T
    dXf, dfwx, dfwh, dfb = _backprop_direction(X, dH[:, :, :hd], model.fwd, cache_f)
    dXb, dbwx, dbwh, dbb = _backprop_direction(X, dH[:, :, hd:], model.bwd, cache_b)
    dX = dXf + dXb
    word_dim = model.word_emb.shape[1]
    d_word = np.zeros_like(model.word_emb)
    d_dict = np.zeros_like(model.dict_emb)
    np.add.at(d_word, ids.ravel(), dX[:, :, :word_dim].reshape(B * T, word_dim))
    np.add.at(d_dict, feats.ravel(), dX[:, :, word_dim:].reshape(B * T, -1))
    grads = [d_word, d_dict, dfwx, dfwh, dfb, dbwx, dbwh, dbb, d_out_w, d_out_b]
    return loss, grads


class Adam:
    def __init__(self, params: list[np.ndarray], lr, beta1=0.9, beta2=0.999, eps=1e-8):
        self.params = params
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]

    def step(self, grads: list[np.ndarray]) -> None:
        self.t += 1
        for k, (p, g) in enumerate(zip(self.params, grads)):
            self.m[k] = self.beta1 * self.m[k] + (1 - self.beta1) * g
            self.v[k] = self.beta2 * self.v[k] + (1 - self.beta2) * g * g
            m_hat = self.m[k] / (1 - self.beta1**self.t)
            v_hat = self.v[k] / (1 - self.beta2**self.t)
            p -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def train(
    corpus: list[tuple[Sentence, list[Tag]]],
    lexicon: Lexicon,
    config: TrainingConfig,
    seed: int,
) -> TrainingResult:
    """Deterministic training run; records the mean loss per epoch."""
    if not corpus:
        raise AlignmentError("training corpus is empty")
    vocab = build_vocab(corpus)
    model = init_model(
        vocab,
        seed=seed,
        word_dim=config.word_dim,
        dict_dim=config.dict_dim,
        hidden_dim=config.hidden_dim,
    )
    encoded = encode_corpus(corpus, lexicon, model)
    optimizer = Adam(
        model.parameters(),
        lr=config.learning_rate,
        beta1=config.beta1,
        beta2=config.beta2,
        eps=config.epsilon,
    )
    rng = np.random.Generator(np.random.PCG64(seed + 1))
    order = np.arange(len(encoded))
    losses = []
    for _ in range(config.epochs):
        rng.shuffle(order)
        total = 0.0
        weight = 0.0
        for start in range(0, len(order), config.batch_size):
            batch = [encoded[k] for k in order[start : start + config.batch_size]]
            ids, feats, tags, mask = pad_batch(batch)
            loss, grads = batch_loss_and_grads(model, ids, feats, tags, mask)
            if config.grad_clip is not None:
                norm = np.sqrt(sum(float((g * g).sum()) for g in grads))
                if norm > config.grad_clip:
                    grads = [g * (config.grad_clip / norm) for g in grads]
            optimizer.step(grads)
            n_real = mask.sum()
            total += loss * n_real
            weight += n_real
        losses.append(total / weight)
    return TrainingResult(model=model, epoch_losses=losses)
