# Motor de álgebras de Krichever-Novikov de gênero zero
