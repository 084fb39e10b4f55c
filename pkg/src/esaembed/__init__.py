"""Low-distortion embeddings of diamond and Laakso graphs into ESA sequence spaces."""
