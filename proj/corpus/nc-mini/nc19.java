public class Answer {
    public static int thin(int stock) {
        int sales = 0;
        while (stock > 0) {
            if (stock % 5 == 0) {
                sales = sales + 2;
            }
            stock = stock - 1;
            sales = sales + 1;
        }
        return sales;
    }
}
