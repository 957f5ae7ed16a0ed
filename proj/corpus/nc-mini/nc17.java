public class Answer {
    public static int settle(int amount) {
        int moves = 0;
        if (amount > 0) {
            while (amount > 0) {
                amount = amount - 3;
                moves = moves + 1;
            }
        }
        return moves;
    }
}
