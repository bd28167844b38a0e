import qid._core  # placeholder
