# Testパッケージのinit file 