from .generator import ChainGenerator, generate_chain, write_chain

__all__ = ["ChainGenerator", "generate_chain", "write_chain"]
