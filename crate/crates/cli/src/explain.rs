//! The math-to-code dictionary behind `ptwist explain <task>`.

pub struct Entry {
    pub task: &'static str,
    pub computes: &'static str,
    pub verifies: &'static str,
}

pub const ENTRIES: &[Entry] = &[
    Entry {
        task: "classify",
        computes: "the Ext ring of the object: graded dimensions, chosen closed representatives, Yoneda table",
        verifies: "whether Ext*(E,E) is k[h]/(h^{n+1}) with |h| = 2 and h^n != 0 (a P^n-object), \
                   k in degrees 0 and d (a spherical object of dimension d), or neither; the P^1 and \
                   2-sphere cases coincide and are both reported",
    },
    Entry {
        task: "ext_dims",
        computes: "graded dimensions of Ext(M, N) as cohomology of the Hom complex of the two semifree modules",
        verifies: "dimension-level statements: orthogonality, shift compatibility, full faithfulness of twists",
    },
    Entry {
        task: "cohomology_dims",
        computes: "graded dimensions of the cohomology of the underlying complex of scalars",
        verifies: "quasi-isomorphism invariants and acyclicity",
    },
    Entry {
        task: "is_acyclic",
        computes: "whether every cohomology group vanishes",
        verifies: "contractibility, e.g. of cones of identity maps",
    },
    Entry {
        task: "euler_char",
        computes: "the alternating sum of cohomology dimensions",
        verifies: "additivity along cone triangles",
    },
    Entry {
        task: "euler_pairing",
        computes: "chi(M, N) = sum of (-1)^i dim Ext^i(M, N)",
        verifies: "the twist acts trivially on the pairing: the induced maps on K-theory and cohomology are the identity",
    },
    Entry {
        task: "minimal_model",
        computes: "a quasi-isomorphic module whose differential has no invertible component, by cancelling \
                   contractible generator pairs, with verified witnesses both ways and an elimination log",
        verifies: "P_E(E) reduces to a single generator in degree 2n: the P-twist shifts the object by [-2n]",
    },
    Entry {
        task: "find_quasi_iso",
        computes: "a seeded random search through closed degree-0 morphisms, each candidate certified by cone acyclicity",
        verifies: "exhibited equivalences, e.g. that the square of the spherical twist agrees with the P-twist; \
                   a dimension mismatch is reported as a proof of inequivalence, exhaustion as inconclusive",
    },
    Entry {
        task: "spherical_twist",
        computes: "the cone of the evaluation map Hom(E,F) (x) E -> F",
        verifies: "the twist at a spherical object: on the object itself it acts by the shift [1-d]",
    },
    Entry {
        task: "p_twist",
        computes: "the double cone: first the map W[-2](x)E -> W(x)E built from pre- and post-composition \
                   with the degree-2 class (W the Hom complex), then the induced evaluation to F; \
                   the evaluation annihilates the first map on the nose, so all maps are strict",
        verifies: "P_E(E) = E[-2n] and P_E(F) = F for F orthogonal to E",
    },
    Entry {
        task: "double_twist",
        computes: "the spherical twist applied twice",
        verifies: "for a P^1-object the square of the spherical twist agrees with the P-twist",
    },
    Entry {
        task: "ambient_profile",
        computes: "Ext of the modeled ambient object against the fibre object, where the ambient object is \
                   the cone on multiplication by the degree-2 obstruction class completing the triangle \
                   E[1] -> C -> E -> E[2]",
        verifies: "a P^n-object with nonvanishing obstruction pushes forward to a spherical object: \
                   profile {0: 1, 2n+1: 1}",
    },
    Entry {
        task: "les_oracle",
        computes: "the predicted ambient profile purely from the Ext multiplication table: \
                   dim at k = dim coker(h: Ext^{k-2} -> Ext^k) + dim ker(h: Ext^{k-1} -> Ext^{k+1})",
        verifies: "independent cross-check of the chain-level ambient profile (the two must agree)",
    },
    Entry {
        task: "spherical_after_pushforward",
        computes: "both the chain-level ambient profile and the oracle prediction, plus the verdict",
        verifies: "sphericality of the pushforward requires the ring structure, not just the graded \
                   dimensions: a ring with vanishing square of the degree-2 class fails",
    },
    Entry {
        task: "euler_invariance_sweep",
        computes: "Euler pairings against a pool before and after the P-twist on seeded random modules",
        verifies: "the twist is invisible to the Euler pairing, sample by sample",
    },
    Entry {
        task: "fully_faithful_sweep",
        computes: "Ext dimensions of seeded random pairs before and after the P-twist",
        verifies: "the twist is fully faithful at the level of dimensions",
    },
    Entry {
        task: "invariant_sweep",
        computes: "seeded random cones, shifts, sums, tensors and twists with structural checks on each",
        verifies: "square-zero of every construction, Euler additivity on cones, shift/dimension \
                   compatibility, Yoneda associativity samples, and minimal-model witness verification",
    },
    Entry {
        task: "pushforward_intertwine",
        computes: "(reserved) the compatibility of the pushforward with the two twists",
        verifies: "reserved for a future ambient-algebra extension; scenarios using it are rejected at validation",
    },
];

pub fn lookup(task: &str) -> Option<&'static Entry> {
    ENTRIES.iter().find(|e| e.task == task)
}

pub fn render(entry: &Entry) -> String {
    format!(
        "{}\n  computes: {}\n  verifies: {}\n",
        entry.task, entry.computes, entry.verifies
    )
}
