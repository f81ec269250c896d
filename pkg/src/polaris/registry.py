import catalogue

# Builders for generated verifier inputs: name -> callable(polar, k, m, l) -> EmbeddingMap.
generators = catalogue.create("polaris", "generators", entry_points=False)

# Theorem verifiers: name -> callable(polar, *, xs, embedding, l, m, budget) -> Certificate, raising Rejection.
theorems = catalogue.create("polaris", "theorems", entry_points=False)
