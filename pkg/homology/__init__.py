# homology module
