# bridge module
