# Package of the curve algebra engine
