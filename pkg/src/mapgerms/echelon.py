"""Sparse incremental Gaussian elimination over Q or F_p.

Columns are non-negative ints; a smaller column is an earlier pivot.  Each
row's pivot is its smallest column and has coefficient 1.  Rows are kept
semi-reduced while inserting (no pivot column of an existing row occurs in a
later inserted row); `rref()` finishes the back-substitution.
"""

from heapq import heapify, heappop, heappush


class Echelon:
    def __init__(self, field, track=False):
        self.field = field
        self.p = field.characteristic
        self.rows = {}          # pivot -> {col: coeff}
        self.combos = {} if track else None   # pivot -> {generator id: coeff}
        self.track = track
        self.ngens = 0
        self.kernel = []        # combos of inserted vectors that reduced to zero
        self._reduced = True

    def __len__(self):
        return len(self.rows)

    def copy(self):
        e = Echelon(self.field, self.track)
        e.rows = {k: dict(v) for k, v in self.rows.items()}
        if self.track:
            e.combos = {k: dict(v) for k, v in self.combos.items()}
        e.ngens = self.ngens
        e.kernel = list(self.kernel)
        e._reduced = self._reduced
        return e

    def reduce(self, vec, combo=None):
        """Return (residue, combo) where vec - residue = -sum combo[g]*gen_g
        (combo only when tracking; `combo` seeds the bookkeeping, so an
        insert seeded with {own id: 1} ends with residue = sum combo*gens)."""
        p = self.p
        rows = self.rows
        v = dict(vec)
        heap = list(v)
        heapify(heap)
        track = self.track and combo is not None
        while heap:
            c = heappop(heap)
            a = v.get(c)
            if not a:
                continue
            row = rows.get(c)
            if row is None:
                continue
            for k, b in row.items():
                old = v.get(k)
                if old is None:
                    nv = -a * b
                    if p:
                        nv %= p
                    if nv:
                        v[k] = nv
                        heappush(heap, k)
                else:
                    nv = old - a * b
                    if p:
                        nv %= p
                    if nv:
                        v[k] = nv
                    else:
                        del v[k]
            if track:
                for g, b in self.combos[c].items():
                    nv = combo.get(g, 0) - a * b
                    if p:
                        nv %= p
                    if nv:
                        combo[g] = nv
                    else:
                        combo.pop(g, None)
        return v, combo

    def insert(self, vec):
        """Insert a vector; returns the new pivot or None if dependent."""
        gid = self.ngens
        self.ngens += 1
        combo = {gid: self.field.one} if self.track else None
        v, combo = self.reduce(vec, combo)
        if not v:
            if self.track:
                # combo expresses 0 = vec - sum(...): a kernel relation
                self.kernel.append(combo)
            return None
        piv = min(v)
        a = v[piv]
        if a != 1:
            inv = self.field.inv(a)
            p = self.p
            if p:
                v = {k: x * inv % p for k, x in v.items()}
                if self.track:
                    combo = {k: x * inv % p for k, x in combo.items()}
            else:
                v = {k: x * inv for k, x in v.items()}
                if self.track:
                    combo = {k: x * inv for k, x in combo.items()}
        self.rows[piv] = v
        if self.track:
            self.combos[piv] = combo
        self._reduced = False
        return piv

    def extend(self, vecs):
        for v in vecs:
            self.insert(v)
        return self

    def rref(self):
        """Eliminate pivot columns from all other rows (in place)."""
        if self._reduced:
            return self
        p = self.p
        pivots = sorted(self.rows, reverse=True)
        done = set()
        for piv in pivots:
            row = self.rows[piv]
            # rows with larger pivots are already fully reduced
            hits = [c for c in row if c != piv and c in done]
            if hits:
                row = dict(row)
                combo = dict(self.combos[piv]) if self.track else None
                for c in sorted(hits):
                    a = row.get(c)
                    if not a:
                        continue
                    for k, b in self.rows[c].items():
                        nv = row.get(k, 0) - a * b
                        if p:
                            nv %= p
                        if nv:
                            row[k] = nv
                        else:
                            row.pop(k, None)
                    if self.track:
                        for g, b in self.combos[c].items():
                            nv = combo.get(g, 0) - a * b
                            if p:
                                nv %= p
                            if nv:
                                combo[g] = nv
                            else:
                                combo.pop(g, None)
                self.rows[piv] = row
                if self.track:
                    self.combos[piv] = combo
            done.add(piv)
        self._reduced = True
        return self

    def contains(self, vec):
        return not self.reduce(vec)[0]
